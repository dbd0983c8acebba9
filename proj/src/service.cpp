// Copyright 2026 The ITMSS Twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "itmss/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include "itmss/recording.hpp"

namespace itmss {

// ---------------------------------------------------------------------------
// Outbox

Outbox::Outbox(std::size_t capacity) : capacity_(capacity) {}

bool Outbox::enqueue_locked(std::string line) {
  if (closed_) return false;
  if (capacity_ != 0 && lines_.size() >= capacity_) {
    // Slow consumer: drop it rather than stall the producer.
    overflowed_ = true;
    closed_ = true;
    lines_.clear();
    ready_.notify_all();
    return false;
  }
  lines_.push_back(std::move(line));
  ready_.notify_one();
  return true;
}

bool Outbox::push(TelemetryMessage message) {
  std::lock_guard lock(mutex_);
  message.seq = next_seq_;
  if (!enqueue_locked(encode(message))) return false;
  ++next_seq_;
  return true;
}

bool Outbox::push_raw(std::string line) {
  std::lock_guard lock(mutex_);
  return enqueue_locked(std::move(line));
}

std::optional<std::string> Outbox::pop() {
  std::unique_lock lock(mutex_);
  ready_.wait(lock, [this] { return !lines_.empty() || closed_; });
  if (lines_.empty()) return std::nullopt;
  std::string line = std::move(lines_.front());
  lines_.pop_front();
  return line;
}

void Outbox::close() {
  std::lock_guard lock(mutex_);
  closed_ = true;
  ready_.notify_all();
}

bool Outbox::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::uint64_t Outbox::next_seq() const {
  std::lock_guard lock(mutex_);
  return next_seq_;
}

// ---------------------------------------------------------------------------
// TelemetryHub

TelemetryHub::TelemetryHub(std::function<ConfigSummaryPayload()> greeting)
    : greeting_(std::move(greeting)) {}

void TelemetryHub::attach(const std::shared_ptr<Outbox>& outbox, bool greet) {
  std::lock_guard lock(mutex_);
  if (greet) {
    outbox->push({0, last_time_, HelloPayload{}});
    if (greeting_) outbox->push({0, last_time_, greeting_()});
  }
  outboxes_.push_back(outbox);
}

void TelemetryHub::publish(const TelemetryMessage& message) {
  std::lock_guard lock(mutex_);
  last_time_ = std::max(last_time_, message.time);
  for (const auto& box : outboxes_) box->push(message);
  prune_locked();
}

void TelemetryHub::publish_raw(const std::string& line) {
  std::lock_guard lock(mutex_);
  for (const auto& box : outboxes_) box->push_raw(line);
  prune_locked();
}

void TelemetryHub::close_all() {
  std::lock_guard lock(mutex_);
  for (const auto& box : outboxes_) box->close();
  outboxes_.clear();
}

std::size_t TelemetryHub::subscriber_count() const {
  std::lock_guard lock(mutex_);
  return outboxes_.size();
}

double TelemetryHub::last_time() const {
  std::lock_guard lock(mutex_);
  return last_time_;
}

void TelemetryHub::prune_locked() {
  std::erase_if(outboxes_, [](const auto& box) { return box->closed(); });
}

// ---------------------------------------------------------------------------
// Socket plumbing

BindAddress parse_bind_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw std::invalid_argument("bind address must be host:port, got '" + text + "'");
  }
  BindAddress out;
  out.host = text.substr(0, colon);
  if (out.host == "localhost") out.host = "127.0.0.1";
  const std::string port = text.substr(colon + 1);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || ptr != port.data() + port.size() || value > 65535) {
    throw std::invalid_argument("bad port in bind address '" + text + "'");
  }
  out.port = static_cast<std::uint16_t>(value);
  in_addr probe{};
  if (inet_pton(AF_INET, out.host.c_str(), &probe) != 1) {
    throw std::invalid_argument("bad IPv4 host in bind address '" + text + "'");
  }
  return out;
}

namespace {

bool send_all(int fd, const char* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

std::string websocket_accept_key(const std::string& key) {
  const std::string material = key + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(material.data()), material.size(), digest);
  unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int len = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<char*>(encoded), static_cast<std::size_t>(len));
}

std::string websocket_frame(std::uint8_t opcode, std::string_view payload) {
  std::string frame;
  frame.push_back(static_cast<char>(0x80 | opcode));
  const std::size_t n = payload.size();
  if (n < 126) {
    frame.push_back(static_cast<char>(n));
  } else if (n <= 0xffff) {
    frame.push_back(static_cast<char>(126));
    frame.push_back(static_cast<char>((n >> 8) & 0xff));
    frame.push_back(static_cast<char>(n & 0xff));
  } else {
    frame.push_back(static_cast<char>(127));
    for (int i = 7; i >= 0; --i) frame.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  }
  frame.append(payload);
  return frame;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

constexpr std::size_t kMaxRecord = 1 << 20;

}  // namespace

struct TcpServer::Connection {
  int fd{-1};
  std::shared_ptr<Outbox> box;
  std::thread reader;
  std::mutex send_mutex;
  bool websocket{false};
  std::atomic<bool> done{false};

  bool send_line(const std::string& line) {
    std::lock_guard lock(send_mutex);
    if (!websocket) return send_all(fd, line.data(), line.size());
    std::string_view body = line;
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    const std::string frame = websocket_frame(0x1, body);
    return send_all(fd, frame.data(), frame.size());
  }

  bool send_control(std::uint8_t opcode, std::string_view payload) {
    std::lock_guard lock(send_mutex);
    const std::string frame = websocket_frame(opcode, payload);
    return send_all(fd, frame.data(), frame.size());
  }
};

TcpServer::TcpServer(TelemetryHub& hub, LineHandler on_line, std::size_t client_buffer)
    : hub_(hub), on_line_(std::move(on_line)), client_buffer_(client_buffer) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start(const BindAddress& address) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(address.port);
  ::inet_pton(AF_INET, address.host.c_str(), &addr.sin_addr);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot bind " + address.host + ":" +
                             std::to_string(address.port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
  while (running_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    reap();
    if (ready <= 0 || !(pfd.revents & POLLIN)) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    conn->box = std::make_shared<Outbox>(client_buffer_);
    {
      std::lock_guard lock(mutex_);
      connections_.push_back(conn);
    }
    conn->reader = std::thread([this, conn] { serve_connection(conn); });
  }
}

void TcpServer::serve_connection(const std::shared_ptr<Connection>& conn) {
  const int fd = conn->fd;
  std::string pending;
  char buf[4096];

  // A WebSocket client speaks first with an HTTP upgrade; a raw client may
  // stay silent, so wait briefly before greeting it.
  pollfd pfd{fd, POLLIN, 0};
  if (::poll(&pfd, 1, 200) > 0 && (pfd.revents & POLLIN)) {
    char peek[4];
    const ssize_t n = ::recv(fd, peek, sizeof peek, MSG_PEEK);
    if (n == 4 && std::string_view(peek, 4) == "GET ") {
      conn->websocket = true;
      while (pending.find("\r\n\r\n") == std::string::npos && pending.size() < 16384) {
        const ssize_t got = ::recv(fd, buf, sizeof buf, 0);
        if (got <= 0) break;
        pending.append(buf, static_cast<std::size_t>(got));
      }
      const auto end = pending.find("\r\n\r\n");
      std::string key;
      if (end != std::string::npos) {
        const std::string head = pending.substr(0, end);
        const std::string lowered = lower(head);
        const auto at = lowered.find("sec-websocket-key:");
        if (at != std::string::npos) {
          auto value_start = at + std::strlen("sec-websocket-key:");
          auto value_end = head.find("\r\n", value_start);
          key = head.substr(value_start, value_end - value_start);
          key.erase(0, key.find_first_not_of(" \t"));
          key.erase(key.find_last_not_of(" \t") + 1);
        }
        pending.erase(0, end + 4);
      }
      if (key.empty()) {
        const std::string reply = "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n";
        send_all(fd, reply.data(), reply.size());
        ::shutdown(fd, SHUT_RDWR);
        conn->done = true;
        return;
      }
      const std::string reply =
          "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\n"
          "Connection: Upgrade\r\nSec-WebSocket-Accept: " +
          websocket_accept_key(key) + "\r\n\r\n";
      send_all(fd, reply.data(), reply.size());
    }
  }

  hub_.attach(conn->box);
  std::thread writer([conn] {
    while (auto line = conn->box->pop()) {
      if (!conn->send_line(*line)) break;
    }
    ::shutdown(conn->fd, SHUT_RDWR);
  });

  auto deliver = [&](std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) on_line_(line, *conn->box);
  };

  std::string message;  // reassembled WebSocket message
  bool open = true;
  while (open) {
    if (!conn->websocket) {
      std::size_t nl;
      while ((nl = pending.find('\n')) != std::string::npos) {
        deliver(pending.substr(0, nl));
        pending.erase(0, nl + 1);
      }
      if (pending.size() > kMaxRecord) pending.clear();
    } else {
      while (pending.size() >= 2) {
        const auto b0 = static_cast<std::uint8_t>(pending[0]);
        const auto b1 = static_cast<std::uint8_t>(pending[1]);
        std::size_t header = 2;
        std::uint64_t len = b1 & 0x7f;
        if (len == 126) {
          if (pending.size() < 4) break;
          len = (static_cast<std::uint8_t>(pending[2]) << 8) | static_cast<std::uint8_t>(pending[3]);
          header = 4;
        } else if (len == 127) {
          if (pending.size() < 10) break;
          len = 0;
          for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<std::uint8_t>(pending[2 + i]);
          header = 10;
        }
        const bool masked = b1 & 0x80;
        const std::size_t mask_at = header;
        if (masked) header += 4;
        if (len > kMaxRecord) {
          open = false;
          break;
        }
        if (pending.size() < header + len) break;
        std::string payload = pending.substr(header, len);
        if (masked) {
          for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= pending[mask_at + (i % 4)];
        }
        pending.erase(0, header + len);
        const std::uint8_t opcode = b0 & 0x0f;
        if (opcode == 0x8) {
          conn->send_control(0x8, {});
          open = false;
          break;
        }
        if (opcode == 0x9) {
          conn->send_control(0xA, payload);
          continue;
        }
        if (opcode == 0x0 || opcode == 0x1 || opcode == 0x2) {
          message += payload;
          if (b0 & 0x80) {
            std::size_t start = 0;
            while (start <= message.size()) {
              const auto nl = message.find('\n', start);
              deliver(message.substr(start, nl - start));
              if (nl == std::string::npos) break;
              start = nl + 1;
            }
            message.clear();
          }
        }
      }
    }
    if (!open) break;
    const ssize_t got = ::recv(fd, buf, sizeof buf, 0);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    pending.append(buf, static_cast<std::size_t>(got));
  }

  conn->box->close();
  ::shutdown(fd, SHUT_RDWR);
  writer.join();
  conn->done = true;
}

void TcpServer::reap() {
  std::vector<std::shared_ptr<Connection>> finished;
  {
    std::lock_guard lock(mutex_);
    auto split = std::partition(connections_.begin(), connections_.end(),
                                [](const auto& c) { return !c->done.load(); });
    finished.assign(split, connections_.end());
    connections_.erase(split, connections_.end());
  }
  for (auto& c : finished) {
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
}

void TcpServer::stop() {
  if (!running_.exchange(false)) return;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  std::vector<std::shared_ptr<Connection>> all;
  {
    std::lock_guard lock(mutex_);
    all.swap(connections_);
  }
  for (auto& c : all) {
    c->box->close();
    ::shutdown(c->fd, SHUT_RDWR);
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
}

std::size_t TcpServer::connection_count() const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(std::count_if(
      connections_.begin(), connections_.end(), [](const auto& c) { return !c->done.load(); }));
}

// ---------------------------------------------------------------------------
// Live mission

TelemetryMessage state_message(const WorldState& w) {
  StatePayload p;
  for (int i = 0; i < 3; ++i) {
    p.position[i] = w.rov.position[i];
    p.velocity[i] = w.rov.velocity[i];
  }
  p.heading = w.rov.heading;
  p.battery_wh = w.rov.battery_wh;
  p.duty = w.winch.current_duty;
  p.target_duty = w.winch.target_duty;
  p.drum_speed = w.winch.drum_speed;
  p.wound_length = w.winch.wound_length;
  p.estopped = w.winch.estopped;
  p.breaker_open = w.winch.breaker_open;
  p.deployed = w.tether.deployed_length;
  p.slack = w.tether.slack;
  p.taut = w.tether.taut;
  p.flow = w.tube.flow();
  p.pump_on = w.pump_on;
  return {0, w.time, p};
}

ConfigSummaryPayload config_summary(const ScenarioConfig& cfg) {
  ConfigSummaryPayload p;
  p.capacity = cfg.spool.capacity;
  p.tube_length = cfg.pump.tube_length;
  p.tube_volume = tube_volume(cfg.pump);
  p.flow = configured_flow(cfg);
  p.transit_time = p.flow > 0.0 ? tube_transit_time(cfg.pump, p.flow) : 0.0;
  p.max_duty = cfg.controller.max_duty;
  p.slider_max = cfg.controller.slider_max;
  p.sample_interval = cfg.analyzer.sample_interval;
  p.duration = cfg.duration;
  p.dt = cfg.dt;
  p.hole = {cfg.hole.x(), cfg.hole.y(), cfg.hole.z()};
  return p;
}

LiveMission::LiveMission(ScenarioConfig cfg, ServeOptions options)
    : cfg_(std::move(cfg)),
      options_(std::move(options)),
      sim_(cfg_),
      hub_([this] { return config_summary(cfg_); }),
      server_(hub_, [this](const std::string& line, Outbox& reply) { handle_line(line, reply); },
              options_.client_buffer) {}

LiveMission::~LiveMission() {
  stop();
  wait();
}

void LiveMission::start() {
  const BindAddress address = parse_bind_address(options_.bind);
  if (!options_.record_path.empty()) {
    recorder_box_ = std::make_shared<Outbox>(0);
    auto sink = open_recording(options_.record_path);
    hub_.attach(recorder_box_);
    recorder_ = std::thread([box = recorder_box_, sink = std::move(sink)]() mutable {
      record(*box, *sink);
    });
  }
  server_.start(address);
  stepper_ = std::thread([this] { stepper(); });
}

void LiveMission::handle_line(const std::string& line, Outbox& reply) {
  const double now = hub_.last_time();
  auto decoded = decode_command(line);
  if (auto* err = std::get_if<DecodeError>(&decoded)) {
    reply.push({0, now,
                AckPayload{0, false, false,
                           "offset " + std::to_string(err->offset) + ": " + err->message}});
    return;
  }
  const auto& msg = std::get<CommandMessage>(decoded);
  bool clamped = false;
  if (const auto* s = std::get_if<WinchSlider>(&msg.command)) {
    clamped = std::abs(s->value) > cfg_.controller.slider_max;
  } else if (const auto* t = std::get_if<RovThrust>(&msg.command)) {
    clamped = std::any_of(t->axes.begin(), t->axes.end(),
                          [](double a) { return !(a >= -1.0 && a <= 1.0); });
  }
  queue_.push(msg.command);
  reply.push({0, now, AckPayload{msg.seq, true, clamped, {}}});
}

void LiveMission::stepper() {
  using clock = std::chrono::steady_clock;
  ScriptCursor cursor(options_.script);
  const auto wall_start = clock::now();
  std::vector<TelemetryMessage> outgoing;
  while (!stop_) {
    outgoing.clear();
    std::uint64_t steps = 0;
    {
      std::lock_guard lock(sim_mutex_);
      if (sim_.finished()) break;
      auto cmds = cursor.due(sim_.world().time + 1e-9);
      for (auto& c : queue_.drain()) cmds.push_back(std::move(c));
      std::stable_partition(cmds.begin(), cmds.end(), is_estop);
      const StepOutput out = sim_.step(cmds);
      const WorldState& w = sim_.world();
      for (std::size_t i = out.first_new_event; i < w.events.size(); ++i) {
        outgoing.push_back(event_message(w.events.events()[i]));
      }
      for (std::size_t i = out.first_new_measurement; i < w.measurements.size(); ++i) {
        outgoing.push_back(measurement_message(w.measurements[i]));
      }
      steps = w.steps;
      if (steps % static_cast<std::uint64_t>(std::max(options_.state_decimation, 1)) == 0 ||
          sim_.finished()) {
        outgoing.push_back(state_message(w));
      }
    }
    for (const auto& m : outgoing) hub_.publish(m);
    if (options_.speed > 0.0) {
      const auto due = wall_start + std::chrono::duration_cast<clock::duration>(
                                        std::chrono::duration<double>(
                                            static_cast<double>(steps) * cfg_.dt / options_.speed));
      std::this_thread::sleep_until(due);
    }
  }
  hub_.close_all();
  done_ = true;
}

void LiveMission::wait() {
  if (stepper_.joinable()) stepper_.join();
  if (recorder_.joinable()) recorder_.join();
  server_.stop();
}

void LiveMission::stop() { stop_ = true; }

WorldState LiveMission::snapshot() const {
  std::lock_guard lock(sim_mutex_);
  return sim_.world();
}

}  // namespace itmss
