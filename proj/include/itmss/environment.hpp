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


// The world the vehicle samples: dissolved gas under an ice sheet, the
// vehicle's kinematics and battery, and sediment contamination windows.

#ifndef ITMSS_ENVIRONMENT_HPP_
#define ITMSS_ENVIRONMENT_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "itmss/winch.hpp"

namespace itmss {

/// Dissolved gas pair, CH4 in nM and CO2 in uatm.
struct Concentration {
  double ch4{};
  double co2{};

  bool operator==(const Concentration&) const = default;
};

struct Plume {
  Eigen::Vector3d center{Eigen::Vector3d::Zero()};
  Eigen::Vector3d sigma{Eigen::Vector3d::Ones()};
  Concentration amplitude;
};

/// Background plus Gaussian patches plus an optional linear increase with
/// distance from shore (x = shore_x is the shoreline, the lake is x > shore_x).
struct GasField {
  Concentration background{4.0, 400.0};
  std::vector<Plume> plumes;
  Concentration trend_per_m{0.0, 0.0};
  double shore_x{0.0};
};

struct IceSheet {
  double thickness_shore{0.05};
  double thickness_far{0.15};
  double far_distance{100.0};  // distance from shore where thickness_far is reached
  double draft_ratio{0.9};
  double shore_x{0.0};

  double thickness_at(const Eigen::Vector3d& position) const;
  double draft_at(const Eigen::Vector3d& position) const;
};

struct RovParams {
  double max_speed{1.0};             // m/s
  double velocity_time_constant{1.0};  // s
  double max_yaw_rate{0.5};          // rad/s
  double battery_capacity_wh{266.0};
  double hotel_power_w{20.0};
  double thrust_power_w{246.0};      // extra draw at full thrust
};

struct RovState {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};  // x east, y north, z depth
  Eigen::Vector3d velocity{Eigen::Vector3d::Zero()};
  double heading{};  // rad, counter-clockwise from +x
  double battery_wh{};
  double max_speed{1.0};
};

/// Horizontal box plus the lake bottom.
struct WorldBounds {
  double x_min{-200.0};
  double x_max{200.0};
  double y_min{-200.0};
  double y_max{200.0};
  double bottom_depth{1.8};
};

struct SedimentSchedule {
  struct Interval {
    double start{};
    double end{};
  };
  std::vector<Interval> intervals;
};

Concentration gas_at(const GasField& field, const Eigen::Vector3d& position,
                     double time);

struct RovStep {
  RovState rov;
  bool tension{false};  // tether limited the motion this step
};

/// Advances the vehicle by `dt` under normalized thrust `command`
/// (surge, sway, heave, yaw; each in [-1, 1]). Velocity follows the command
/// with a first-order lag, integrated exactly over the step.
RovStep step_rov(const RovState& rov, const RovParams& params,
                 const std::array<double, 4>& command, const IceSheet& ice,
                 const WorldBounds& bounds, const TetherState& tether,
                 const Eigen::Vector3d& hole_position, double dt);

/// Closed start, open end.
bool is_contaminated(const SedimentSchedule& schedule, double t);

/// Average electrical draw for a thrust command, W.
double rov_power_draw(const RovParams& params,
                      const std::array<double, 4>& command);

}  // namespace itmss

#endif  // ITMSS_ENVIRONMENT_HPP_
