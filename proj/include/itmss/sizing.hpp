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


// Winch, pump and battery sizing check for a scenario.

#ifndef ITMSS_SIZING_HPP_
#define ITMSS_SIZING_HPP_

#include <string>
#include <vector>

#include "itmss/config.hpp"
#include "itmss/hydro.hpp"

namespace itmss {

struct PowerVariant {
  const char* label;
  double speed_radius;   // radius used for the required speed
  double torque_radius;  // radius used for the operating torque
  double omega;
  double torque;
  double power;
  bool pass;
};

struct SizingReport {
  double line_speed{};
  double drag{};
  double torque{};  // at full-drum radius
  double omega{};   // at bare-drum radius
  double power{};
  double rated_power{};
  bool power_pass{};
  std::vector<PowerVariant> variants;  // reference pairing first, then consistent radii

  double stall_torque_full_duty{};
  double no_load_drum_speed{};

  OperatingPoint pump_point;
  double flow_at_required_head{};  // pump flow delivered against required_head_max
  double tube_volume{};
  double transit_time{};

  EnduranceResult constant_draw;  // max current continuously
  EnduranceResult duty_profile;
  double required_hours{};
  bool endurance_pass{};

  double ambient_temperature{};
  double min_operating_temperature{};
  bool temperature_pass{};
};

SizingReport compute_sizing(const ScenarioConfig& cfg);
std::string format_sizing(const SizingReport& report);

/// The repeating on/off draw profile described by `profile`.
std::vector<DrawSegment> duty_draw_profile(const DutyProfile& profile);

}  // namespace itmss

#endif  // ITMSS_SIZING_HPP_
