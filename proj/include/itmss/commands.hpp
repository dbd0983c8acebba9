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


// Operator commands, shared by the command script reader, the wire protocol
// and the simulation's command queue.

#ifndef ITMSS_COMMANDS_HPP_
#define ITMSS_COMMANDS_HPP_

#include <array>
#include <deque>
#include <mutex>
#include <variant>
#include <vector>

namespace itmss {

struct WinchSlider {
  int value{};
  bool operator==(const WinchSlider&) const = default;
};

/// Normalized thrust: surge, sway, heave (positive down), yaw.
struct RovThrust {
  std::array<double, 4> axes{};
  bool operator==(const RovThrust&) const = default;
};

struct EStop {
  bool operator==(const EStop&) const = default;
};

struct EStopReset {
  bool operator==(const EStopReset&) const = default;
};

struct PumpPower {
  bool on{true};
  bool operator==(const PumpPower&) const = default;
};

// Script-only commands; not part of the wire protocol.
struct BreakerSet {
  bool open{};
  bool operator==(const BreakerSet&) const = default;
};

struct SimStop {
  bool operator==(const SimStop&) const = default;
};

using Command = std::variant<WinchSlider, RovThrust, EStop, EStopReset,
                             PumpPower, BreakerSet, SimStop>;

inline bool is_estop(const Command& cmd) {
  return std::holds_alternative<EStop>(cmd);
}

/// Multi-producer, single-consumer queue feeding the stepper. Draining puts
/// every pending e-stop ahead of the other pending commands; relative order
/// is otherwise kept.
class CommandQueue {
 public:
  void push(Command cmd);
  std::vector<Command> drain();
  bool empty() const;

 private:
  mutable std::mutex mutex_;
  std::deque<Command> pending_;
};

}  // namespace itmss

#endif  // ITMSS_COMMANDS_HPP_
