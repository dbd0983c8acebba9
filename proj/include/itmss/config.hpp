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


// Scenario configuration: every physical and operational parameter of a run,
// loaded from a sectioned key = value document.

#ifndef ITMSS_CONFIG_HPP_
#define ITMSS_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "itmss/environment.hpp"
#include "itmss/hydro.hpp"
#include "itmss/sampling.hpp"
#include "itmss/winch.hpp"

namespace itmss {

/// System head seen by the pump, static_head + loss_coefficient * Q^2.
struct SystemCurve {
  double static_head{0.0};       // m
  double loss_coefficient{0.0};  // m / (m^3/s)^2

  double head(double flow) const { return static_head + loss_coefficient * flow * flow; }
};

/// Repeating on/off current draw used for the ITMSS endurance check.
struct DutyProfile {
  double duty_cycle{0.5};
  double cycle_period_s{60.0};
  double draw_current_a{39.0};
  double horizon_s{6.0 * 3600.0};
  double required_hours{3.0};
};

struct ScenarioConfig {
  // [world]
  WorldBounds bounds;
  Eigen::Vector3d hole{Eigen::Vector3d::Zero()};
  HydroParams hydro;
  RovParams rov;
  Eigen::Vector3d rov_start{1.0, 0.0, 0.5};
  double rov_heading{0.0};
  double water_temperature{2.0};  // degC, metadata
  double salinity{0.0};           // PSU, metadata
  double ambient_temperature{-5.0};
  double min_operating_temperature{-15.0};

  // [ice]
  IceSheet ice;

  // [gas]
  GasField gas;

  // [spool]
  SpoolGeometry spool;
  double initial_deployed{5.0};
  double design_line_speed{1.0};

  // [motor]
  MotorSpec motor;

  // [pump]
  PumpSpec pump;
  SystemCurve system;
  bool pump_on{true};

  // [battery]
  BatterySpec battery;
  DutyProfile duty_profile;

  // [controller]
  ControllerConfig controller;

  // [analyzer]
  AnalyzerSpec analyzer;
  double dispersion_sigma{0.0};  // s, 0 = pure plug flow

  // [mission]
  double duration{3600.0};
  double dt{0.02};
  std::uint64_t seed{1};
  SedimentSchedule sediment;
  int track_decimation{10};
  double battery_low_fraction{0.1};
};

/// Raised by load_config; carries one diagnostic per problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// The Lake Whitehall scenario; what an empty document yields.
ScenarioConfig default_scenario();

/// Parses and validates. Unknown sections and keys are rejected.
ScenarioConfig load_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Invariant violations of an assembled config, empty when valid.
std::vector<std::string> validate(const ScenarioConfig& cfg);

/// Analyzer steps per sample; sample_interval is a whole number of dt.
int steps_per_sample(const ScenarioConfig& cfg);

}  // namespace itmss

#endif  // ITMSS_CONFIG_HPP_
