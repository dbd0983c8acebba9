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


// ITMSS winch controller and quasi-static drum dynamics.

#ifndef ITMSS_WINCH_HPP_
#define ITMSS_WINCH_HPP_

#include <Eigen/Core>

#include "itmss/events.hpp"
#include "itmss/hydro.hpp"

namespace itmss {

struct ControllerConfig {
  double tick_rate{50.0};   // Hz
  double ramp_step{0.01};   // duty per tick
  double max_duty{0.8};     // hard cap on |duty|
  int slider_max{100};      // slider spans [-slider_max, slider_max]
};

/// Positive duty reels line in (wound length grows), negative pays out.
struct WinchState {
  double target_duty{};
  double current_duty{};
  double drum_speed{};  // rad/s, signed like the duty
  double wound_length{};
  bool estopped{false};
  bool breaker_open{false};
  bool at_limit{false};

  bool operator==(const WinchState&) const = default;
};

/// Slack below this counts as taut; absorbs rounding after the vehicle is
/// projected back onto the tether sphere.
inline constexpr double kTautTolerance = 1e-9;

struct TetherState {
  double deployed_length{};
  double straight_line_distance{};
  double slack{};
  bool taut{false};

  bool operator==(const TetherState&) const = default;
};

/// Ticks needed for an e-stop to bring any reachable duty to zero.
int estop_tick_bound(const ControllerConfig& cfg);

/// Maps a slider position to a target duty. Out-of-range sliders are clamped
/// and reported as a clamp event. Ignored while e-stopped or with the breaker
/// open.
WinchState apply_command(const WinchState& state, const ControllerConfig& cfg,
                         int slider, EventLog* log = nullptr, double now = 0.0);

WinchState engage_estop(const WinchState& state, EventLog* log = nullptr,
                        double now = 0.0);
WinchState reset_estop(const WinchState& state, EventLog* log = nullptr,
                       double now = 0.0);

/// Opening the breaker cuts drive immediately; closing it re-arms at zero.
WinchState set_breaker(const WinchState& state, bool open);

/// One controller tick: slew current duty toward target by at most
/// ramp_step. E-stop slews toward zero.
WinchState tick_controller(const WinchState& state, const ControllerConfig& cfg,
                           double dt);

/// Advances drum speed and wound length for one step under `load_torque`.
WinchState step_dynamics(const WinchState& state, const SpoolGeometry& spool,
                         const MotorSpec& motor, double load_torque, double dt,
                         EventLog* log = nullptr, double now = 0.0);

/// Line speed at the drum surface for the current state (m/s, signed).
double line_speed(const WinchState& state, const SpoolGeometry& spool);

TetherState update_tether(const SpoolGeometry& spool, double wound_length,
                          const Eigen::Vector3d& rov_position,
                          const Eigen::Vector3d& hole_position);

}  // namespace itmss

#endif  // ITMSS_WINCH_HPP_
