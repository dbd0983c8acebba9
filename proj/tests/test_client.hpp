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


// Minimal blocking TCP and WebSocket clients for service tests.

#ifndef ITMSS_TESTS_TEST_CLIENT_HPP_
#define ITMSS_TESTS_TEST_CLIENT_HPP_

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace itmss::testing {

class LineClient {
 public:
  explicit LineClient(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      ::close(fd_);
      throw std::runtime_error("connect failed");
    }
  }
  ~LineClient() { ::close(fd_); }
  LineClient(const LineClient&) = delete;
  LineClient& operator=(const LineClient&) = delete;

  void send(const std::string& bytes) {
    std::size_t off = 0;
    while (off < bytes.size()) {
      const ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
      if (n <= 0) throw std::runtime_error("send failed");
      off += static_cast<std::size_t>(n);
    }
  }

  /// Raw bytes, or nullopt on EOF / timeout.
  std::optional<std::string> read_some(int timeout_ms) {
    pollfd p{fd_, POLLIN, 0};
    if (::poll(&p, 1, timeout_ms) <= 0) return std::nullopt;
    char buf[65536];
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) return std::nullopt;
    return std::string(buf, static_cast<std::size_t>(n));
  }

  /// Next newline-terminated line (newline included).
  std::optional<std::string> read_line(int timeout_ms = 5000) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (true) {
      const auto nl = pending_.find('\n');
      if (nl != std::string::npos) {
        std::string line = pending_.substr(0, nl + 1);
        pending_.erase(0, nl + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now()).count();
      if (left <= 0) return std::nullopt;
      auto chunk = read_some(static_cast<int>(left));
      if (!chunk) return std::nullopt;
      pending_ += *chunk;
    }
  }

  int fd() const { return fd_; }
  std::string& pending() { return pending_; }

 private:
  int fd_{-1};
  std::string pending_;
};

/// Client side of RFC 6455 on top of LineClient's socket.
class WsClient {
 public:
  explicit WsClient(std::uint16_t port) : tcp_(port) {}

  /// Sends the upgrade request and returns the response head.
  std::string handshake(const std::string& key) {
    tcp_.send("GET / HTTP/1.1\r\nHost: localhost\r\nUpgrade: websocket\r\n"
              "Connection: Upgrade\r\nSec-WebSocket-Key: " + key +
              "\r\nSec-WebSocket-Version: 13\r\n\r\n");
    std::string& buf = tcp_.pending();
    while (buf.find("\r\n\r\n") == std::string::npos) {
      auto chunk = tcp_.read_some(5000);
      if (!chunk) break;
      buf += *chunk;
    }
    const auto end = buf.find("\r\n\r\n");
    if (end == std::string::npos) return buf;
    std::string head = buf.substr(0, end);
    buf.erase(0, end + 4);
    return head;
  }

  void send_text(const std::string& payload) {
    std::string frame;
    frame.push_back(static_cast<char>(0x81));
    const std::uint8_t mask[4] = {0x12, 0x34, 0x56, 0x78};
    if (payload.size() < 126) {
      frame.push_back(static_cast<char>(0x80 | payload.size()));
    } else {
      frame.push_back(static_cast<char>(0x80 | 126));
      frame.push_back(static_cast<char>(payload.size() >> 8));
      frame.push_back(static_cast<char>(payload.size() & 0xff));
    }
    for (auto m : mask) frame.push_back(static_cast<char>(m));
    for (std::size_t i = 0; i < payload.size(); ++i) {
      frame.push_back(static_cast<char>(payload[i] ^ mask[i % 4]));
    }
    tcp_.send(frame);
  }

  /// Next data frame payload (server frames are unmasked).
  std::optional<std::string> read_frame(int timeout_ms = 5000) {
    std::string& buf = tcp_.pending();
    while (true) {
      if (buf.size() >= 2) {
        std::size_t len = static_cast<std::uint8_t>(buf[1]) & 0x7f;
        std::size_t header = 2;
        if (len == 126 && buf.size() >= 4) {
          len = (static_cast<std::uint8_t>(buf[2]) << 8) | static_cast<std::uint8_t>(buf[3]);
          header = 4;
        } else if (len == 127 && buf.size() >= 10) {
          len = 0;
          for (int i = 0; i < 8; ++i) len = (len << 8) | static_cast<std::uint8_t>(buf[2 + i]);
          header = 10;
        }
        if ((len < 126 || header > 2) && buf.size() >= header + len) {
          std::string payload = buf.substr(header, len);
          buf.erase(0, header + len);
          return payload;
        }
      }
      auto chunk = tcp_.read_some(timeout_ms);
      if (!chunk) return std::nullopt;
      buf += *chunk;
    }
  }

 private:
  LineClient tcp_;
};

}  // namespace itmss::testing

#endif  // ITMSS_TESTS_TEST_CLIENT_HPP_
