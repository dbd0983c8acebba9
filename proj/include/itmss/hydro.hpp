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

// Physical sizing models for the tether winch, pump and batteries.
//
// Everything here is a pure function over SI quantities. The functions are
// templated on the scalar type so they can be evaluated with autodiff or
// interval types as well as double.

#ifndef ITMSS_HYDRO_HPP_
#define ITMSS_HYDRO_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace itmss {

template <typename Scalar>
struct HydroParamsT {
  Scalar drag_coefficient{1.05};
  Scalar frontal_area{0.086};  // m^2
  Scalar water_density{997.0};  // kg/m^3
};

template <typename Scalar>
struct SpoolGeometryT {
  Scalar radius_empty{0.0952};  // m, bare drum
  Scalar radius_full{0.168};    // m, full drum
  Scalar capacity{150.0};       // m of coupled tether and tubing
  Scalar friction_torque{0.762};  // N m
};

template <typename Scalar>
struct MotorSpecT {
  Scalar rated_power{372.85};  // W
  Scalar no_load_speed{188.5};  // rad/s at the motor shaft
  Scalar gear_ratio{10.0};
  Scalar drivetrain_efficiency{0.85};
  Scalar supply_voltage{12.0};
  Scalar max_current{39.0};
};

template <typename Scalar>
struct PumpSpecT {
  Scalar nominal_flow{1.3e-4};  // m^3/s, free delivery
  Scalar shutoff_head{60.0};    // m
  Scalar tube_inner_diameter{0.00635};
  Scalar tube_length{150.0};
  Scalar required_head_min{3.0};
  Scalar required_head_max{5.0};
};

template <typename Scalar>
struct BatterySpecT {
  Scalar voltage{12.0};
  Scalar capacity_ah{110.0};
};

using HydroParams = HydroParamsT<double>;
using SpoolGeometry = SpoolGeometryT<double>;
using MotorSpec = MotorSpecT<double>;
using PumpSpec = PumpSpecT<double>;
using BatterySpec = BatterySpecT<double>;

namespace detail {
[[noreturn]] inline void domain_fail(const std::string& what) {
  throw std::domain_error(what);
}
}  // namespace detail

/// Quadratic drag on the vehicle, 0.5 Cd A rho V^2.
template <typename Scalar>
Scalar drag_force(const HydroParamsT<Scalar>& params, Scalar speed) {
  if (speed < Scalar(0)) detail::domain_fail("drag_force: negative speed");
  return Scalar(0.5) * params.drag_coefficient * params.frontal_area *
         params.water_density * speed * speed;
}

/// Torque the drum must deliver: spool friction plus line pull at `radius`.
template <typename Scalar>
Scalar operating_torque(const SpoolGeometryT<Scalar>& spool, Scalar drag,
                        Scalar radius) {
  if (drag < Scalar(0)) detail::domain_fail("operating_torque: negative drag");
  if (radius < spool.radius_empty || radius > spool.radius_full) {
    detail::domain_fail("operating_torque: radius outside spool bounds");
  }
  return spool.friction_torque + radius * drag;
}

/// Drum angular speed that reels line at `line_speed`.
template <typename Scalar>
Scalar required_speed(Scalar line_speed, Scalar radius) {
  if (radius <= Scalar(0)) detail::domain_fail("required_speed: radius <= 0");
  if (line_speed < Scalar(0)) {
    detail::domain_fail("required_speed: negative line speed");
  }
  return line_speed / radius;
}

/// Rated motor power requirement, 4 * omega * torque. The factor of four is
/// kept as written; compare the result against MotorSpec::rated_power.
template <typename Scalar>
Scalar rated_power_requirement(Scalar omega, Scalar torque) {
  if (omega < Scalar(0) || torque < Scalar(0)) {
    detail::domain_fail("rated_power_requirement: negative input");
  }
  return Scalar(4) * omega * torque;
}

/// Winding radius with `wound_length` of line on the drum. Linear between
/// the bare and full radii.
template <typename Scalar>
Scalar effective_radius(const SpoolGeometryT<Scalar>& spool,
                        Scalar wound_length) {
  if (wound_length < Scalar(0) || wound_length > spool.capacity) {
    detail::domain_fail("effective_radius: wound length outside [0, capacity]");
  }
  return spool.radius_empty + (spool.radius_full - spool.radius_empty) *
                                  (wound_length / spool.capacity);
}

/// Stall torque at the drum for a given duty.
template <typename Scalar>
Scalar drum_stall_torque(const MotorSpecT<Scalar>& motor, Scalar duty) {
  const Scalar motor_stall = Scalar(4) * motor.rated_power / motor.no_load_speed;
  return duty * motor_stall * motor.gear_ratio * motor.drivetrain_efficiency;
}

/// Drum speed of the affine PMDC model under `load_torque`. Zero at and
/// beyond stall.
template <typename Scalar>
Scalar drum_speed_under_load(const MotorSpecT<Scalar>& motor, Scalar duty,
                             Scalar load_torque) {
  if (duty < Scalar(0) || duty > Scalar(1)) {
    detail::domain_fail("drum_speed_under_load: duty outside [0, 1]");
  }
  if (load_torque < Scalar(0)) {
    detail::domain_fail("drum_speed_under_load: negative load torque");
  }
  if (duty == Scalar(0)) return Scalar(0);
  const Scalar stall = drum_stall_torque(motor, duty);
  const Scalar free_speed = duty * motor.no_load_speed / motor.gear_ratio;
  if (load_torque >= stall) return Scalar(0);
  return free_speed * (Scalar(1) - load_torque / stall);
}

/// Head produced by the linear pump curve at `flow`.
template <typename Scalar>
Scalar pump_head(const PumpSpecT<Scalar>& pump, Scalar flow) {
  return pump.shutoff_head * (Scalar(1) - flow / pump.nominal_flow);
}

template <typename Scalar>
struct OperatingPointT {
  Scalar flow{};
  Scalar head{};
  bool no_flow{false};  // system head at zero flow reaches shutoff
};
using OperatingPoint = OperatingPointT<double>;

/// Intersection of the pump curve with a monotone increasing system curve.
/// Bisection on flow; the returned head is the pump head at that flow.
template <typename Scalar>
OperatingPointT<Scalar> pump_operating_point(
    const PumpSpecT<Scalar>& pump,
    const std::function<Scalar(Scalar)>& system_head) {
  auto excess = [&](Scalar q) { return pump_head(pump, q) - system_head(q); };
  if (excess(Scalar(0)) <= Scalar(0)) {
    return {Scalar(0), system_head(Scalar(0)), true};
  }
  if (excess(pump.nominal_flow) >= Scalar(0)) {
    return {pump.nominal_flow, pump_head(pump, pump.nominal_flow), false};
  }
  Scalar lo(0);
  Scalar hi = pump.nominal_flow;
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (excess(mid) > Scalar(0)) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::numeric_limits<Scalar>::epsilon() * pump.nominal_flow) {
      break;
    }
  }
  const Scalar q = Scalar(0.5) * (lo + hi);
  return {q, pump_head(pump, q), false};
}

template <typename Scalar>
Scalar tube_cross_section(const PumpSpecT<Scalar>& pump) {
  return std::numbers::pi_v<Scalar> * pump.tube_inner_diameter *
         pump.tube_inner_diameter / Scalar(4);
}

template <typename Scalar>
Scalar tube_volume(const PumpSpecT<Scalar>& pump) {
  return tube_cross_section(pump) * pump.tube_length;
}

/// Plug-flow residence time of the full tube.
template <typename Scalar>
Scalar tube_transit_time(const PumpSpecT<Scalar>& pump, Scalar flow) {
  if (flow <= Scalar(0)) detail::domain_fail("tube_transit_time: flow <= 0");
  return tube_volume(pump) / flow;
}

struct DrawSegment {
  double duration_s{};
  double current_a{};
};

struct EnduranceResult {
  double seconds{};      // time of depletion, or total profile duration
  bool depleted{false};
};

/// Walks a current draw profile and reports when the battery's amp-hours are
/// used up.
inline EnduranceResult battery_endurance(const BatterySpec& battery,
                                         std::span<const DrawSegment> profile) {
  double remaining_as = battery.capacity_ah * 3600.0;
  double elapsed = 0.0;
  for (const auto& seg : profile) {
    if (seg.current_a < 0.0) {
      detail::domain_fail("battery_endurance: negative current");
    }
    const double used = seg.current_a * seg.duration_s;
    if (used >= remaining_as && seg.current_a > 0.0) {
      return {elapsed + remaining_as / seg.current_a, true};
    }
    remaining_as -= used;
    elapsed += seg.duration_s;
  }
  return {elapsed, false};
}

}  // namespace itmss

#endif  // ITMSS_HYDRO_HPP_
