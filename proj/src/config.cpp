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


#include "itmss/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace itmss {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(value)) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, std::size_t expected) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    values.push_back(parse_number(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) +
                                " comma-separated numbers, got " +
                                std::to_string(values.size()));
  }
  return values;
}

bool parse_bool(std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

int parse_int(std::string_view text) {
  const double v = parse_number(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw std::invalid_argument("expected an integer");
  }
  return static_cast<int>(v);
}

Eigen::Vector3d parse_vec3(std::string_view text) {
  const auto v = parse_list(text, 3);
  return {v[0], v[1], v[2]};
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

Setter number(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v) { c.*field = parse_number(v); };
}

template <typename Sub>
Setter nested(Sub ScenarioConfig::*member, double Sub::*field) {
  return [member, field](ScenarioConfig& c, std::string_view v) {
    (c.*member).*field = parse_number(v);
  };
}

// Keys that may repeat. A value of "none" clears the list (including the
// built-in defaults); the first explicit entry also replaces the defaults.
struct RepeatState {
  bool plumes_touched{false};
  bool windows_touched{false};
};

std::map<std::string, SectionTable, std::less<>> make_tables(RepeatState& repeat) {
  std::map<std::string, SectionTable, std::less<>> t;

  t["world"] = {
      {"bounds",
       [](ScenarioConfig& c, std::string_view v) {
         const auto b = parse_list(v, 4);
         c.bounds.x_min = b[0];
         c.bounds.x_max = b[1];
         c.bounds.y_min = b[2];
         c.bounds.y_max = b[3];
       }},
      {"bottom_depth", nested(&ScenarioConfig::bounds, &WorldBounds::bottom_depth)},
      {"hole", [](ScenarioConfig& c, std::string_view v) { c.hole = parse_vec3(v); }},
      {"drag_coefficient", nested(&ScenarioConfig::hydro, &HydroParams::drag_coefficient)},
      {"frontal_area", nested(&ScenarioConfig::hydro, &HydroParams::frontal_area)},
      {"water_density", nested(&ScenarioConfig::hydro, &HydroParams::water_density)},
      {"water_temperature", number(&ScenarioConfig::water_temperature)},
      {"salinity", number(&ScenarioConfig::salinity)},
      {"ambient_temperature", number(&ScenarioConfig::ambient_temperature)},
      {"min_operating_temperature", number(&ScenarioConfig::min_operating_temperature)},
      {"rov_start", [](ScenarioConfig& c, std::string_view v) { c.rov_start = parse_vec3(v); }},
      {"rov_heading", number(&ScenarioConfig::rov_heading)},
      {"rov_max_speed", nested(&ScenarioConfig::rov, &RovParams::max_speed)},
      {"rov_velocity_time_constant",
       nested(&ScenarioConfig::rov, &RovParams::velocity_time_constant)},
      {"rov_max_yaw_rate", nested(&ScenarioConfig::rov, &RovParams::max_yaw_rate)},
      {"rov_battery_wh", nested(&ScenarioConfig::rov, &RovParams::battery_capacity_wh)},
      {"rov_hotel_power", nested(&ScenarioConfig::rov, &RovParams::hotel_power_w)},
      {"rov_thrust_power", nested(&ScenarioConfig::rov, &RovParams::thrust_power_w)},
  };

  t["ice"] = {
      {"thickness_shore", nested(&ScenarioConfig::ice, &IceSheet::thickness_shore)},
      {"thickness_far", nested(&ScenarioConfig::ice, &IceSheet::thickness_far)},
      {"far_distance", nested(&ScenarioConfig::ice, &IceSheet::far_distance)},
      {"draft_ratio", nested(&ScenarioConfig::ice, &IceSheet::draft_ratio)},
      {"shore_x",
       [](ScenarioConfig& c, std::string_view v) {
         c.ice.shore_x = parse_number(v);
         c.gas.shore_x = c.ice.shore_x;
       }},
  };

  t["gas"] = {
      {"background_ch4",
       [](ScenarioConfig& c, std::string_view v) { c.gas.background.ch4 = parse_number(v); }},
      {"background_co2",
       [](ScenarioConfig& c, std::string_view v) { c.gas.background.co2 = parse_number(v); }},
      {"trend_ch4",
       [](ScenarioConfig& c, std::string_view v) { c.gas.trend_per_m.ch4 = parse_number(v); }},
      {"trend_co2",
       [](ScenarioConfig& c, std::string_view v) { c.gas.trend_per_m.co2 = parse_number(v); }},
      {"plume",
       [&repeat](ScenarioConfig& c, std::string_view v) {
         if (!repeat.plumes_touched) c.gas.plumes.clear();
         repeat.plumes_touched = true;
         if (trim(v) == "none") {
           c.gas.plumes.clear();
           return;
         }
         const auto p = parse_list(v, 8);
         c.gas.plumes.push_back(
             {{p[0], p[1], p[2]}, {p[3], p[4], p[5]}, {p[6], p[7]}});
       }},
  };

  t["spool"] = {
      {"radius_empty", nested(&ScenarioConfig::spool, &SpoolGeometry::radius_empty)},
      {"radius_full", nested(&ScenarioConfig::spool, &SpoolGeometry::radius_full)},
      {"capacity", nested(&ScenarioConfig::spool, &SpoolGeometry::capacity)},
      {"friction_torque", nested(&ScenarioConfig::spool, &SpoolGeometry::friction_torque)},
      {"initial_deployed", number(&ScenarioConfig::initial_deployed)},
      {"design_line_speed", number(&ScenarioConfig::design_line_speed)},
  };

  t["motor"] = {
      {"rated_power", nested(&ScenarioConfig::motor, &MotorSpec::rated_power)},
      {"no_load_speed", nested(&ScenarioConfig::motor, &MotorSpec::no_load_speed)},
      {"gear_ratio", nested(&ScenarioConfig::motor, &MotorSpec::gear_ratio)},
      {"efficiency", nested(&ScenarioConfig::motor, &MotorSpec::drivetrain_efficiency)},
      {"supply_voltage", nested(&ScenarioConfig::motor, &MotorSpec::supply_voltage)},
      {"max_current", nested(&ScenarioConfig::motor, &MotorSpec::max_current)},
  };

  t["pump"] = {
      {"nominal_flow", nested(&ScenarioConfig::pump, &PumpSpec::nominal_flow)},
      {"shutoff_head", nested(&ScenarioConfig::pump, &PumpSpec::shutoff_head)},
      {"tube_inner_diameter", nested(&ScenarioConfig::pump, &PumpSpec::tube_inner_diameter)},
      {"tube_length", nested(&ScenarioConfig::pump, &PumpSpec::tube_length)},
      {"required_head_min", nested(&ScenarioConfig::pump, &PumpSpec::required_head_min)},
      {"required_head_max", nested(&ScenarioConfig::pump, &PumpSpec::required_head_max)},
      {"static_head", nested(&ScenarioConfig::system, &SystemCurve::static_head)},
      {"loss_coefficient", nested(&ScenarioConfig::system, &SystemCurve::loss_coefficient)},
      {"initially_on",
       [](ScenarioConfig& c, std::string_view v) { c.pump_on = parse_bool(v); }},
  };

  t["battery"] = {
      {"voltage", nested(&ScenarioConfig::battery, &BatterySpec::voltage)},
      {"capacity_ah", nested(&ScenarioConfig::battery, &BatterySpec::capacity_ah)},
      {"duty_cycle", nested(&ScenarioConfig::duty_profile, &DutyProfile::duty_cycle)},
      {"cycle_period", nested(&ScenarioConfig::duty_profile, &DutyProfile::cycle_period_s)},
      {"draw_current", nested(&ScenarioConfig::duty_profile, &DutyProfile::draw_current_a)},
      {"horizon", nested(&ScenarioConfig::duty_profile, &DutyProfile::horizon_s)},
      {"required_hours", nested(&ScenarioConfig::duty_profile, &DutyProfile::required_hours)},
  };

  t["controller"] = {
      {"tick_rate", nested(&ScenarioConfig::controller, &ControllerConfig::tick_rate)},
      {"ramp_step", nested(&ScenarioConfig::controller, &ControllerConfig::ramp_step)},
      {"max_duty", nested(&ScenarioConfig::controller, &ControllerConfig::max_duty)},
      {"slider_max",
       [](ScenarioConfig& c, std::string_view v) { c.controller.slider_max = parse_int(v); }},
  };

  t["analyzer"] = {
      {"sample_interval", nested(&ScenarioConfig::analyzer, &AnalyzerSpec::sample_interval)},
      {"time_constant",
       nested(&ScenarioConfig::analyzer, &AnalyzerSpec::response_time_constant)},
      {"noise_ch4",
       [](ScenarioConfig& c, std::string_view v) { c.analyzer.noise_sigma.ch4 = parse_number(v); }},
      {"noise_co2",
       [](ScenarioConfig& c, std::string_view v) { c.analyzer.noise_sigma.co2 = parse_number(v); }},
      {"dispersion_sigma", number(&ScenarioConfig::dispersion_sigma)},
  };

  t["mission"] = {
      {"duration", number(&ScenarioConfig::duration)},
      {"dt", number(&ScenarioConfig::dt)},
      {"seed",
       [](ScenarioConfig& c, std::string_view v) {
         const double s = parse_number(v);
         if (s < 0 || s != std::floor(s)) throw std::invalid_argument("seed must be a non-negative integer");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"track_decimation",
       [](ScenarioConfig& c, std::string_view v) { c.track_decimation = parse_int(v); }},
      {"battery_low_fraction", number(&ScenarioConfig::battery_low_fraction)},
      {"contamination",
       [&repeat](ScenarioConfig& c, std::string_view v) {
         if (!repeat.windows_touched) c.sediment.intervals.clear();
         repeat.windows_touched = true;
         if (trim(v) == "none") {
           c.sediment.intervals.clear();
           return;
         }
         const auto w = parse_list(v, 2);
         c.sediment.intervals.push_back({w[0], w[1]});
       }},
  };
  return t;
}

void require(std::vector<std::string>& out, bool ok, const char* field,
             const char* rule) {
  if (!ok) out.push_back(std::string(field) + ": " + rule);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario config";
        for (const auto& d : diagnostics) msg += "\n  " + d;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  // Calibrated so the series peaks at 300 nM / 1250 uatm over a 4 nM /
  // 400 uatm background.
  c.gas.plumes = {
      {{58.7, 58.7, 0.1}, {20.0, 20.0, 3.0}, {296.0, 850.0}},
      {{30.0, -10.0, 0.5}, {8.0, 8.0, 2.0}, {40.0, 150.0}},
      {{-20.0, 70.0, 0.5}, {15.0, 15.0, 2.0}, {60.0, 200.0}},
  };
  c.sediment.intervals = {{1900.0, 2620.0}};
  return c;
}

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> e;
  require(e, c.bounds.x_min < c.bounds.x_max && c.bounds.y_min < c.bounds.y_max,
          "[world] bounds", "must satisfy x_min < x_max and y_min < y_max");
  require(e, c.bounds.bottom_depth > 0, "[world] bottom_depth", "must be > 0");
  require(e, c.hydro.drag_coefficient >= 0 && c.hydro.drag_coefficient <= 3,
          "[world] drag_coefficient", "must be in [0, 3]");
  require(e, c.hydro.frontal_area > 0, "[world] frontal_area", "must be > 0");
  require(e, c.hydro.water_density > 0, "[world] water_density", "must be > 0");
  require(e, c.rov.max_speed > 0, "[world] rov_max_speed", "must be > 0");
  require(e, c.rov.velocity_time_constant >= 0, "[world] rov_velocity_time_constant",
          "must be >= 0");
  require(e, c.rov.max_yaw_rate >= 0, "[world] rov_max_yaw_rate", "must be >= 0");
  require(e, c.rov.battery_capacity_wh > 0, "[world] rov_battery_wh", "must be > 0");
  require(e, c.rov.hotel_power_w >= 0 && c.rov.thrust_power_w >= 0,
          "[world] rov_hotel_power/rov_thrust_power", "must be >= 0");

  require(e, c.ice.thickness_shore >= 0 && c.ice.thickness_far >= 0,
          "[ice] thickness_shore/thickness_far", "must be >= 0");
  require(e, c.ice.far_distance > 0, "[ice] far_distance", "must be > 0");
  require(e, c.ice.draft_ratio >= 0 && c.ice.draft_ratio <= 1, "[ice] draft_ratio",
          "must be in [0, 1]");
  require(e, std::max(c.ice.thickness_shore, c.ice.thickness_far) * c.ice.draft_ratio <
                 c.bounds.bottom_depth,
          "[ice] thickness", "ice draft must stay above the bottom");

  require(e, c.gas.background.ch4 >= 0 && c.gas.background.co2 >= 0,
          "[gas] background", "must be >= 0");
  require(e, c.gas.trend_per_m.ch4 >= 0 && c.gas.trend_per_m.co2 >= 0, "[gas] trend",
          "must be >= 0");
  for (const auto& p : c.gas.plumes) {
    require(e, (p.sigma.array() > 0).all(), "[gas] plume", "sigma must be > 0");
    require(e, p.amplitude.ch4 >= 0 && p.amplitude.co2 >= 0, "[gas] plume",
            "amplitudes must be >= 0");
  }

  require(e, c.spool.radius_empty > 0 && c.spool.radius_empty < c.spool.radius_full,
          "[spool] radius_empty", "must satisfy 0 < radius_empty < radius_full");
  require(e, c.spool.capacity > 0, "[spool] capacity", "must be > 0");
  require(e, c.spool.friction_torque >= 0, "[spool] friction_torque", "must be >= 0");
  require(e, c.initial_deployed >= 0 && c.initial_deployed <= c.spool.capacity,
          "[spool] initial_deployed", "must be in [0, capacity]");
  require(e, c.design_line_speed >= 0, "[spool] design_line_speed", "must be >= 0");

  require(e, c.motor.rated_power > 0, "[motor] rated_power", "must be > 0");
  require(e, c.motor.no_load_speed > 0, "[motor] no_load_speed", "must be > 0");
  require(e, c.motor.gear_ratio > 0, "[motor] gear_ratio", "must be > 0");
  require(e, c.motor.drivetrain_efficiency > 0 && c.motor.drivetrain_efficiency <= 1,
          "[motor] efficiency", "must be in (0, 1]");
  require(e, c.motor.max_current > 0, "[motor] max_current", "must be > 0");
  require(e, c.motor.supply_voltage > 0, "[motor] supply_voltage", "must be > 0");

  require(e, c.pump.nominal_flow > 0, "[pump] nominal_flow", "must be > 0");
  require(e, c.pump.shutoff_head > c.pump.required_head_max, "[pump] shutoff_head",
          "must exceed required_head_max");
  require(e, c.pump.tube_inner_diameter > 0, "[pump] tube_inner_diameter", "must be > 0");
  require(e, c.pump.tube_length > 0, "[pump] tube_length", "must be > 0");
  require(e, c.pump.required_head_min >= 0 &&
                 c.pump.required_head_min <= c.pump.required_head_max,
          "[pump] required_head_min", "must be in [0, required_head_max]");
  require(e, c.system.loss_coefficient >= 0, "[pump] loss_coefficient", "must be >= 0");

  require(e, c.battery.voltage > 0, "[battery] voltage", "must be > 0");
  require(e, c.battery.capacity_ah > 0, "[battery] capacity_ah", "must be > 0");
  require(e, c.duty_profile.duty_cycle >= 0 && c.duty_profile.duty_cycle <= 1,
          "[battery] duty_cycle", "must be in [0, 1]");
  require(e, c.duty_profile.cycle_period_s > 0, "[battery] cycle_period", "must be > 0");
  require(e, c.duty_profile.draw_current_a >= 0, "[battery] draw_current", "must be >= 0");
  require(e, c.duty_profile.horizon_s > 0, "[battery] horizon", "must be > 0");

  require(e, c.controller.tick_rate > 0, "[controller] tick_rate", "must be > 0");
  require(e, c.controller.ramp_step > 0 && c.controller.ramp_step <= 1,
          "[controller] ramp_step", "must be in (0, 1]");
  require(e, c.controller.max_duty > 0 && c.controller.max_duty <= 1,
          "[controller] max_duty", "must be in (0, 1]");
  require(e, c.controller.slider_max > 0, "[controller] slider_max", "must be > 0");

  require(e, c.analyzer.sample_interval > 0, "[analyzer] sample_interval", "must be > 0");
  require(e, c.analyzer.response_time_constant >= 0, "[analyzer] time_constant",
          "must be >= 0");
  require(e, c.analyzer.noise_sigma.ch4 >= 0 && c.analyzer.noise_sigma.co2 >= 0,
          "[analyzer] noise", "must be >= 0");
  require(e, c.dispersion_sigma >= 0, "[analyzer] dispersion_sigma", "must be >= 0");

  require(e, c.duration >= 0, "[mission] duration", "must be >= 0");
  require(e, c.dt > 0, "[mission] dt", "must be > 0");
  if (c.dt > 0 && c.controller.tick_rate > 0) {
    require(e, std::abs(c.dt * c.controller.tick_rate - 1.0) < 1e-9, "[mission] dt",
            "must equal 1 / [controller] tick_rate");
  }
  if (c.dt > 0 && c.analyzer.sample_interval > 0) {
    const double ratio = c.analyzer.sample_interval / c.dt;
    require(e, std::abs(ratio - std::round(ratio)) < 1e-9 && ratio >= 1,
            "[analyzer] sample_interval", "must be a whole multiple of [mission] dt");
  }
  require(e, c.track_decimation >= 1, "[mission] track_decimation", "must be >= 1");
  require(e, c.battery_low_fraction >= 0 && c.battery_low_fraction < 1,
          "[mission] battery_low_fraction", "must be in [0, 1)");
  double last_end = -1.0;
  auto windows = c.sediment.intervals;
  std::sort(windows.begin(), windows.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  for (const auto& w : windows) {
    require(e, w.start >= 0 && w.end > w.start && w.end <= c.duration,
            "[mission] contamination", "windows must satisfy 0 <= start < end <= duration");
    require(e, w.start >= last_end, "[mission] contamination", "windows must be disjoint");
    last_end = w.end;
  }

  const Eigen::Vector3d& s = c.rov_start;
  require(e, s.x() >= c.bounds.x_min && s.x() <= c.bounds.x_max &&
                 s.y() >= c.bounds.y_min && s.y() <= c.bounds.y_max &&
                 s.z() <= c.bounds.bottom_depth && s.z() >= c.ice.draft_at(s),
          "[world] rov_start", "must lie inside the water column and world bounds");
  require(e, (s - c.hole).norm() <= c.initial_deployed, "[world] rov_start",
          "must be within initial_deployed of the hole");
  return e;
}

ScenarioConfig load_config(std::string_view text) {
  ScenarioConfig cfg = default_scenario();
  RepeatState repeat;
  const auto tables = make_tables(repeat);
  std::vector<std::string> errors;

  const SectionTable* section = nullptr;
  std::string section_name;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "unterminated section header");
        section = nullptr;
        continue;
      }
      section_name = trim(std::string_view(line).substr(1, line.size() - 2));
      const auto it = tables.find(section_name);
      if (it == tables.end()) {
        errors.push_back(where + "unknown section [" + section_name + "]");
        section = nullptr;
        section_name.clear();
      } else {
        section = &it->second;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section == nullptr) {
      if (section_name.empty()) errors.push_back(where + "key '" + key + "' outside any section");
      continue;
    }
    const auto setter = section->find(key);
    if (setter == section->end()) {
      errors.push_back(where + "unknown key '" + key + "' in [" + section_name + "]");
      continue;
    }
    try {
      setter->second(cfg, value);
    } catch (const std::exception& ex) {
      errors.push_back(where + "[" + section_name + "] " + key + ": " + ex.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  auto violations = validate(cfg);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

int steps_per_sample(const ScenarioConfig& cfg) {
  return static_cast<int>(std::lround(cfg.analyzer.sample_interval / cfg.dt));
}

}  // namespace itmss
