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


#include "itmss/protocol.hpp"

#include <cmath>

#include <json.hpp>

namespace itmss {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct FieldError {
  std::string message;
};

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{std::string("missing field '") + key + "'"};
  return *it;
}

double number_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw FieldError{std::string("field '") + key + "' must be a number"};
  return v.get<double>();
}

std::optional<double> nullable_number(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw FieldError{std::string("field '") + key + "' must be a number or null"};
  return v.get<double>();
}

bool bool_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_boolean()) throw FieldError{std::string("field '") + key + "' must be a boolean"};
  return v.get<bool>();
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw FieldError{std::string("field '") + key + "' must be a string"};
  return v.get<std::string>();
}

std::uint64_t seq_field(const json& obj) {
  const json& v = field(obj, "seq");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw FieldError{"field 'seq' must be a non-negative integer"};
  }
  return v.get<std::uint64_t>();
}

const json& object_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_object()) throw FieldError{std::string("field '") + key + "' must be an object"};
  return v;
}

template <std::size_t N>
std::array<double, N> array_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array() || v.size() != N) {
    throw FieldError{std::string("field '") + key + "' must be an array of " +
                     std::to_string(N) + " numbers"};
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) throw FieldError{std::string("field '") + key + "' must hold numbers"};
    out[i] = v[i].get<double>();
  }
  return out;
}

ordered_json nullable(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T, typename Fn>
std::variant<T, DecodeError> parse_line(std::string_view line, Fn&& build) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    return DecodeError{e.byte, e.what()};
  }
  if (!doc.is_object()) return DecodeError{0, "record is not an object"};
  try {
    return build(doc);
  } catch (const FieldError& e) {
    return DecodeError{0, e.message};
  } catch (const json::exception& e) {
    return DecodeError{0, e.what()};
  }
}

}  // namespace

std::string_view kind_name(const Payload& payload) {
  static constexpr std::string_view kNames[] = {"hello", "config_summary", "state",
                                                "measurement", "event", "ack"};
  return kNames[payload.index()];
}

std::string encode(const TelemetryMessage& message) {
  ordered_json j;
  j["seq"] = message.seq;
  j["t"] = message.time;
  j["kind"] = std::string(kind_name(message.payload));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HelloPayload>) {
          j["v"] = p.version;
          j["server"] = p.server;
        } else if constexpr (std::is_same_v<T, ConfigSummaryPayload>) {
          j["capacity_m"] = p.capacity;
          j["tube_length_m"] = p.tube_length;
          j["tube_volume_m3"] = p.tube_volume;
          j["flow_m3s"] = p.flow;
          j["transit_s"] = p.transit_time;
          j["max_duty"] = p.max_duty;
          j["slider_max"] = p.slider_max;
          j["sample_interval_s"] = p.sample_interval;
          j["duration_s"] = p.duration;
          j["dt_s"] = p.dt;
          j["hole"] = p.hole;
        } else if constexpr (std::is_same_v<T, StatePayload>) {
          j["rov"] = {{"pos", p.position},
                      {"vel", p.velocity},
                      {"heading", p.heading},
                      {"battery_wh", p.battery_wh}};
          j["winch"] = {{"duty", p.duty},
                        {"target", p.target_duty},
                        {"drum_speed", p.drum_speed},
                        {"wound", p.wound_length},
                        {"estop", p.estopped},
                        {"breaker", p.breaker_open}};
          j["tether"] = {{"deployed", p.deployed}, {"slack", p.slack}, {"taut", p.taut}};
          j["pump"] = {{"flow", p.flow}, {"on", p.pump_on}};
        } else if constexpr (std::is_same_v<T, MeasurementPayload>) {
          j["ch4"] = nullable(p.ch4);
          j["co2"] = nullable(p.co2);
          j["valid"] = p.valid;
          j["lag"] = p.lag;
        } else if constexpr (std::is_same_v<T, EventPayload>) {
          j["event"] = std::string(to_string(p.event));
          j["detail"] = p.detail;
        } else {
          j["cmd_seq"] = p.cmd_seq;
          j["ok"] = p.ok;
          j["clamped"] = p.clamped;
          if (!p.error.empty()) j["error"] = p.error;
        }
      },
      message.payload);
  return j.dump() + "\n";
}

std::variant<TelemetryMessage, DecodeError> decode_telemetry(std::string_view line) {
  return parse_line<TelemetryMessage>(line, [](const json& j) -> TelemetryMessage {
    TelemetryMessage m;
    m.seq = seq_field(j);
    m.time = number_field(j, "t");
    const std::string kind = string_field(j, "kind");
    if (kind == "hello") {
      HelloPayload p;
      const double v = number_field(j, "v");
      if (v != kProtocolVersion) throw FieldError{"unsupported protocol version"};
      p.version = kProtocolVersion;
      p.server = string_field(j, "server");
      m.payload = p;
    } else if (kind == "config_summary") {
      ConfigSummaryPayload p;
      p.capacity = number_field(j, "capacity_m");
      p.tube_length = number_field(j, "tube_length_m");
      p.tube_volume = number_field(j, "tube_volume_m3");
      p.flow = number_field(j, "flow_m3s");
      p.transit_time = number_field(j, "transit_s");
      p.max_duty = number_field(j, "max_duty");
      p.slider_max = static_cast<int>(number_field(j, "slider_max"));
      p.sample_interval = number_field(j, "sample_interval_s");
      p.duration = number_field(j, "duration_s");
      p.dt = number_field(j, "dt_s");
      p.hole = array_field<3>(j, "hole");
      m.payload = p;
    } else if (kind == "state") {
      StatePayload p;
      const json& rov = object_field(j, "rov");
      p.position = array_field<3>(rov, "pos");
      p.velocity = array_field<3>(rov, "vel");
      p.heading = number_field(rov, "heading");
      p.battery_wh = number_field(rov, "battery_wh");
      const json& winch = object_field(j, "winch");
      p.duty = number_field(winch, "duty");
      p.target_duty = number_field(winch, "target");
      p.drum_speed = number_field(winch, "drum_speed");
      p.wound_length = number_field(winch, "wound");
      p.estopped = bool_field(winch, "estop");
      p.breaker_open = bool_field(winch, "breaker");
      const json& tether = object_field(j, "tether");
      p.deployed = number_field(tether, "deployed");
      p.slack = number_field(tether, "slack");
      p.taut = bool_field(tether, "taut");
      const json& pump = object_field(j, "pump");
      p.flow = number_field(pump, "flow");
      p.pump_on = bool_field(pump, "on");
      m.payload = p;
    } else if (kind == "measurement") {
      MeasurementPayload p;
      p.ch4 = nullable_number(j, "ch4");
      p.co2 = nullable_number(j, "co2");
      p.valid = bool_field(j, "valid");
      p.lag = number_field(j, "lag");
      m.payload = p;
    } else if (kind == "event") {
      EventPayload p;
      const std::string name = string_field(j, "event");
      const auto ek = event_kind_from_string(name);
      if (!ek) throw FieldError{"unknown event kind '" + name + "'"};
      p.event = *ek;
      p.detail = string_field(j, "detail");
      m.payload = p;
    } else if (kind == "ack") {
      AckPayload p;
      const json& cs = field(j, "cmd_seq");
      if (!cs.is_number_unsigned()) throw FieldError{"field 'cmd_seq' must be a non-negative integer"};
      p.cmd_seq = cs.get<std::uint64_t>();
      p.ok = bool_field(j, "ok");
      p.clamped = bool_field(j, "clamped");
      if (j.contains("error")) p.error = string_field(j, "error");
      m.payload = p;
    } else {
      throw FieldError{"unknown kind '" + kind + "'"};
    }
    return m;
  });
}

std::string encode(const CommandMessage& message) {
  ordered_json j;
  j["seq"] = message.seq;
  std::visit(
      [&j](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, WinchSlider>) {
          j["kind"] = "winch_slider";
          j["value"] = c.value;
        } else if constexpr (std::is_same_v<T, RovThrust>) {
          j["kind"] = "rov_thrust";
          j["thrust"] = c.axes;
        } else if constexpr (std::is_same_v<T, EStop>) {
          j["kind"] = "estop";
        } else if constexpr (std::is_same_v<T, EStopReset>) {
          j["kind"] = "estop_reset";
        } else if constexpr (std::is_same_v<T, PumpPower>) {
          j["kind"] = "pump_power";
          j["on"] = c.on;
        } else {
          throw std::invalid_argument("command kind is not part of the wire protocol");
        }
      },
      message.command);
  return j.dump() + "\n";
}

std::variant<CommandMessage, DecodeError> decode_command(std::string_view line) {
  return parse_line<CommandMessage>(line, [](const json& j) -> CommandMessage {
    CommandMessage m;
    m.seq = seq_field(j);
    const std::string kind = string_field(j, "kind");
    if (kind == "winch_slider") {
      const double v = number_field(j, "value");
      if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw FieldError{"field 'value' must be an integer"};
      }
      m.command = WinchSlider{static_cast<int>(v)};
    } else if (kind == "rov_thrust") {
      m.command = RovThrust{array_field<4>(j, "thrust")};
    } else if (kind == "estop") {
      m.command = EStop{};
    } else if (kind == "estop_reset") {
      m.command = EStopReset{};
    } else if (kind == "pump_power") {
      m.command = PumpPower{bool_field(j, "on")};
    } else {
      throw FieldError{"unknown kind '" + kind + "'"};
    }
    return m;
  });
}

TelemetryMessage measurement_message(const Measurement& m) {
  return {0, m.time, MeasurementPayload{m.ch4, m.co2, m.valid, m.transit_lag}};
}

Measurement to_measurement(const TelemetryMessage& message) {
  const auto& p = std::get<MeasurementPayload>(message.payload);
  return {message.time, p.ch4, p.co2, p.valid, p.lag};
}

TelemetryMessage event_message(const Event& e) {
  return {0, e.time, EventPayload{e.kind, e.detail}};
}

}  // namespace itmss
