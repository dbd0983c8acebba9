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


#include "itmss/winch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace itmss {
namespace {

// Float headroom when snapping the ramp onto its target.
constexpr double kSnapTolerance = 1e-9;

double step_toward(double current, double target, double step) {
  const double gap = target - current;
  if (std::abs(gap) <= step * (1.0 + kSnapTolerance)) return target;
  return current + std::copysign(step, gap);
}

}  // namespace

int estop_tick_bound(const ControllerConfig& cfg) {
  return static_cast<int>(
      std::ceil(cfg.max_duty / cfg.ramp_step - kSnapTolerance));
}

WinchState apply_command(const WinchState& state, const ControllerConfig& cfg,
                         int slider, EventLog* log, double now) {
  if (state.estopped || state.breaker_open) return state;
  const int clamped = std::clamp(slider, -cfg.slider_max, cfg.slider_max);
  if (clamped != slider && log != nullptr) {
    log->add(now, EventKind::kClamp,
             "slider " + std::to_string(slider) + " clamped to " +
                 std::to_string(clamped));
  }
  WinchState next = state;
  next.target_duty =
      std::clamp(static_cast<double>(clamped) / cfg.slider_max, -cfg.max_duty,
                 cfg.max_duty);
  return next;
}

WinchState engage_estop(const WinchState& state, EventLog* log, double now) {
  WinchState next = state;
  next.target_duty = 0.0;
  if (!state.estopped && log != nullptr) {
    log->add(now, EventKind::kEstop, "engaged");
  }
  next.estopped = true;
  return next;
}

WinchState reset_estop(const WinchState& state, EventLog* log, double now) {
  WinchState next = state;
  if (state.estopped && log != nullptr) log->add(now, EventKind::kEstop, "reset");
  next.estopped = false;
  next.target_duty = 0.0;
  return next;
}

WinchState set_breaker(const WinchState& state, bool open) {
  WinchState next = state;
  next.breaker_open = open;
  next.target_duty = 0.0;
  if (open) {
    next.current_duty = 0.0;
    next.drum_speed = 0.0;
  }
  return next;
}

WinchState tick_controller(const WinchState& state, const ControllerConfig& cfg,
                           double /*dt*/) {
  WinchState next = state;
  if (state.breaker_open) {
    next.target_duty = 0.0;
    next.current_duty = 0.0;
    return next;
  }
  if (state.estopped) next.target_duty = 0.0;
  const double target =
      std::clamp(next.target_duty, -cfg.max_duty, cfg.max_duty);
  next.current_duty = std::clamp(
      step_toward(state.current_duty, target, cfg.ramp_step), -cfg.max_duty,
      cfg.max_duty);
  return next;
}

WinchState step_dynamics(const WinchState& state, const SpoolGeometry& spool,
                         const MotorSpec& motor, double load_torque, double dt,
                         EventLog* log, double now) {
  WinchState next = state;
  const double duty = std::min(std::abs(state.current_duty), 1.0);
  const double speed = std::copysign(
      drum_speed_under_load(motor, duty, std::max(load_torque, 0.0)),
      state.current_duty);
  next.drum_speed = duty == 0.0 ? 0.0 : speed;

  const double radius = effective_radius(spool, state.wound_length);
  const double wound = state.wound_length + next.drum_speed * radius * dt;
  const double limited = std::clamp(wound, 0.0, spool.capacity);
  if (limited != wound) {
    next.drum_speed = 0.0;
    if (!state.at_limit && log != nullptr) {
      log->add(now, EventKind::kLimit,
               limited == 0.0 ? "drum empty" : "drum full");
    }
    next.at_limit = true;
  } else {
    next.at_limit = false;
  }
  next.wound_length = limited;
  return next;
}

double line_speed(const WinchState& state, const SpoolGeometry& spool) {
  return state.drum_speed * effective_radius(spool, state.wound_length);
}

TetherState update_tether(const SpoolGeometry& spool, double wound_length,
                          const Eigen::Vector3d& rov_position,
                          const Eigen::Vector3d& hole_position) {
  TetherState tether;
  tether.deployed_length = spool.capacity - wound_length;
  tether.straight_line_distance = (rov_position - hole_position).norm();
  tether.slack = tether.deployed_length - tether.straight_line_distance;
  tether.taut = tether.slack <= kTautTolerance;
  return tether;
}

}  // namespace itmss
