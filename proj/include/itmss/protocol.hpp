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


// Telemetry protocol v1: newline-delimited JSON records.
//
// Server to client records carry {"seq", "t", "kind", ...}; kinds are hello,
// config_summary, state, measurement, event and ack. Client to server records
// carry {"seq", "kind", ...}; kinds are winch_slider, rov_thrust, estop,
// estop_reset and pump_power. Unknown fields are ignored; unknown kinds are
// rejected. docs/protocol.md has the full field list.

#ifndef ITMSS_PROTOCOL_HPP_
#define ITMSS_PROTOCOL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "itmss/commands.hpp"
#include "itmss/events.hpp"
#include "itmss/sampling.hpp"

namespace itmss {

inline constexpr int kProtocolVersion = 1;

struct HelloPayload {
  int version{kProtocolVersion};
  std::string server{"itmss-twin"};
  bool operator==(const HelloPayload&) const = default;
};

struct ConfigSummaryPayload {
  double capacity{};
  double tube_length{};
  double tube_volume{};
  double flow{};
  double transit_time{};
  double max_duty{};
  int slider_max{};
  double sample_interval{};
  double duration{};
  double dt{};
  std::array<double, 3> hole{};
  bool operator==(const ConfigSummaryPayload&) const = default;
};

struct StatePayload {
  std::array<double, 3> position{};
  std::array<double, 3> velocity{};
  double heading{};
  double battery_wh{};
  double duty{};
  double target_duty{};
  double drum_speed{};
  double wound_length{};
  bool estopped{};
  bool breaker_open{};
  double deployed{};
  double slack{};
  bool taut{};
  double flow{};
  bool pump_on{};
  bool operator==(const StatePayload&) const = default;
};

struct MeasurementPayload {
  std::optional<double> ch4;
  std::optional<double> co2;
  bool valid{};
  double lag{};
  bool operator==(const MeasurementPayload&) const = default;
};

struct EventPayload {
  EventKind event{EventKind::kLimit};
  std::string detail;
  bool operator==(const EventPayload&) const = default;
};

struct AckPayload {
  std::uint64_t cmd_seq{};
  bool ok{true};
  bool clamped{false};
  std::string error;
  bool operator==(const AckPayload&) const = default;
};

using Payload = std::variant<HelloPayload, ConfigSummaryPayload, StatePayload,
                             MeasurementPayload, EventPayload, AckPayload>;

struct TelemetryMessage {
  std::uint64_t seq{};
  double time{};
  Payload payload;
  bool operator==(const TelemetryMessage&) const = default;
};

/// Wire commands; the script-only kinds (breaker, sim stop) are not encodable.
struct CommandMessage {
  std::uint64_t seq{};
  Command command;
  bool operator==(const CommandMessage&) const = default;
};

struct DecodeError {
  std::size_t offset{};  // byte offset into the line where parsing failed
  std::string message;
};

std::string_view kind_name(const Payload& payload);

/// One record terminated by '\n'.
std::string encode(const TelemetryMessage& message);
std::string encode(const CommandMessage& message);

std::variant<TelemetryMessage, DecodeError> decode_telemetry(std::string_view line);
std::variant<CommandMessage, DecodeError> decode_command(std::string_view line);

TelemetryMessage measurement_message(const Measurement& m);
Measurement to_measurement(const TelemetryMessage& message);
TelemetryMessage event_message(const Event& e);

}  // namespace itmss

#endif  // ITMSS_PROTOCOL_HPP_
