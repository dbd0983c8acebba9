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


// Live telemetry service: fan-out of protocol records to any number of
// clients, command intake into the simulation, and the paced live mission.

#ifndef ITMSS_SERVICE_HPP_
#define ITMSS_SERVICE_HPP_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "itmss/commands.hpp"
#include "itmss/config.hpp"
#include "itmss/protocol.hpp"
#include "itmss/script.hpp"
#include "itmss/sim.hpp"

namespace itmss {

/// Outbound line queue of one subscriber. Each outbox numbers the records it
/// encodes, so every connection sees seq 0, 1, 2, ... without gaps. A bounded
/// outbox that overflows closes itself instead of blocking the producer.
class Outbox {
 public:
  explicit Outbox(std::size_t capacity = 4096);  // 0 = unbounded

  /// Stamps the next sequence number, encodes and queues. False once closed.
  bool push(TelemetryMessage message);
  /// Queues an already-encoded line verbatim.
  bool push_raw(std::string line);

  /// Blocks until a line is available or the outbox is closed and drained.
  std::optional<std::string> pop();

  void close();
  bool closed() const;
  bool overflowed() const { return overflowed_.load(); }
  std::uint64_t next_seq() const;

 private:
  bool enqueue_locked(std::string line);

  const std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<std::string> lines_;
  std::uint64_t next_seq_{0};
  bool closed_{false};
  std::atomic<bool> overflowed_{false};
};

/// Broadcasts records to every attached outbox.
class TelemetryHub {
 public:
  /// `greeting` produces the config_summary sent after hello; may be empty.
  explicit TelemetryHub(std::function<ConfigSummaryPayload()> greeting = {});

  /// Sends hello (+ config_summary) and then the live stream to `outbox`.
  void attach(const std::shared_ptr<Outbox>& outbox, bool greet = true);
  void publish(const TelemetryMessage& message);
  void publish_raw(const std::string& line);
  /// Closes every outbox; readers drain what is queued then stop.
  void close_all();
  std::size_t subscriber_count() const;
  double last_time() const;

 private:
  void prune_locked();

  std::function<ConfigSummaryPayload()> greeting_;
  mutable std::mutex mutex_;
  std::vector<std::shared_ptr<Outbox>> outboxes_;
  double last_time_{0.0};
};

struct BindAddress {
  std::string host;
  std::uint16_t port{};
};

/// Parses "host:port" (host may be a dotted IPv4 address or "localhost").
/// Throws std::invalid_argument when malformed.
BindAddress parse_bind_address(const std::string& text);

/// Accepts TCP clients speaking newline-delimited records, or WebSocket
/// clients (one record per text frame) on the same port.
class TcpServer {
 public:
  /// Called on a reader thread for every complete inbound record; replies go
  /// to the outbox of the sending client.
  using LineHandler = std::function<void(const std::string& line, Outbox& reply)>;

  TcpServer(TelemetryHub& hub, LineHandler on_line, std::size_t client_buffer = 4096);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  /// Binds and starts accepting. Throws std::runtime_error on failure.
  void start(const BindAddress& address);
  void stop();
  std::uint16_t port() const { return port_; }
  std::size_t connection_count() const;

 private:
  struct Connection;
  void accept_loop();
  void serve_connection(const std::shared_ptr<Connection>& conn);
  void reap();

  TelemetryHub& hub_;
  LineHandler on_line_;
  std::size_t client_buffer_;
  int listen_fd_{-1};
  std::uint16_t port_{0};
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  mutable std::mutex mutex_;
  std::vector<std::shared_ptr<Connection>> connections_;
};

TelemetryMessage state_message(const WorldState& world);
ConfigSummaryPayload config_summary(const ScenarioConfig& cfg);

struct ServeOptions {
  std::string bind{"127.0.0.1:7700"};
  double speed{1.0};        // sim seconds per wall second; <= 0 runs unpaced
  int state_decimation{10};  // steps between state records (5 Hz at 50 Hz)
  std::size_t client_buffer{4096};
  std::string record_path;   // empty = no recording
  std::vector<ScriptEntry> script;
};

/// A mission stepped in (scaled) real time with the telemetry service
/// attached. Commands from any client go into one queue drained by the
/// stepper each tick, e-stops first.
class LiveMission {
 public:
  LiveMission(ScenarioConfig cfg, ServeOptions options);
  ~LiveMission();

  /// Binds the server and launches the stepper. Throws on bind failure.
  void start();
  /// Blocks until the mission has finished and the stream is flushed.
  void wait();
  void stop();

  std::uint16_t port() const { return server_.port(); }
  bool finished() const { return done_.load(); }
  TelemetryHub& hub() { return hub_; }
  /// Latest world snapshot (copied under lock).
  WorldState snapshot() const;

 private:
  void handle_line(const std::string& line, Outbox& reply);
  void stepper();

  ScenarioConfig cfg_;
  ServeOptions options_;
  Simulation sim_;
  mutable std::mutex sim_mutex_;
  CommandQueue queue_;
  TelemetryHub hub_;
  TcpServer server_;
  std::shared_ptr<Outbox> recorder_box_;
  std::thread recorder_;
  std::thread stepper_;
  std::atomic<bool> stop_{false};
  std::atomic<bool> done_{false};
};

}  // namespace itmss

#endif  // ITMSS_SERVICE_HPP_
