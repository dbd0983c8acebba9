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


#include "itmss/environment.hpp"

#include <algorithm>
#include <cmath>

namespace itmss {

double IceSheet::thickness_at(const Eigen::Vector3d& position) const {
  const double distance = std::max(position.x() - shore_x, 0.0);
  const double blend = far_distance > 0.0 ? std::min(distance / far_distance, 1.0) : 1.0;
  return thickness_shore + (thickness_far - thickness_shore) * blend;
}

double IceSheet::draft_at(const Eigen::Vector3d& position) const {
  return draft_ratio * thickness_at(position);
}

Concentration gas_at(const GasField& field, const Eigen::Vector3d& position,
                     double /*time*/) {
  Concentration c = field.background;
  for (const Plume& plume : field.plumes) {
    const double r2 =
        ((position - plume.center).array() / plume.sigma.array()).square().sum();
    const double weight = std::exp(-0.5 * r2);
    c.ch4 += plume.amplitude.ch4 * weight;
    c.co2 += plume.amplitude.co2 * weight;
  }
  const double offshore = std::max(position.x() - field.shore_x, 0.0);
  c.ch4 += field.trend_per_m.ch4 * offshore;
  c.co2 += field.trend_per_m.co2 * offshore;
  return c;
}

double rov_power_draw(const RovParams& params,
                      const std::array<double, 4>& command) {
  double sq = 0.0;
  for (double a : command) {
    const double c = std::clamp(a, -1.0, 1.0);
    sq += c * c;
  }
  return params.hotel_power_w + params.thrust_power_w * std::min(std::sqrt(sq), 1.0);
}

RovStep step_rov(const RovState& rov, const RovParams& params,
                 const std::array<double, 4>& command, const IceSheet& ice,
                 const WorldBounds& bounds, const TetherState& tether,
                 const Eigen::Vector3d& hole_position, double dt) {
  std::array<double, 4> cmd{};
  if (rov.battery_wh > 0.0) {
    for (std::size_t i = 0; i < cmd.size(); ++i) {
      cmd[i] = std::clamp(command[i], -1.0, 1.0);
    }
  }

  RovStep out{rov, false};
  RovState& next = out.rov;
  const double heading = rov.heading;
  next.heading = std::remainder(heading + cmd[3] * params.max_yaw_rate * dt,
                                2.0 * M_PI);

  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const Eigen::Vector3d commanded =
      rov.max_speed * Eigen::Vector3d(c * cmd[0] - s * cmd[1],
                                      s * cmd[0] + c * cmd[1], cmd[2]);

  // Exact solution of v' = (v_cmd - v) / tau over the step.
  Eigen::Vector3d displacement = commanded * dt;
  if (params.velocity_time_constant > 0.0) {
    const double tau = params.velocity_time_constant;
    const double decay = std::exp(-dt / tau);
    displacement += (rov.velocity - commanded) * tau * (1.0 - decay);
    next.velocity = commanded + (rov.velocity - commanded) * decay;
  } else {
    next.velocity = commanded;
  }

  Eigen::Vector3d p = rov.position + displacement;
  p.x() = std::clamp(p.x(), bounds.x_min, bounds.x_max);
  p.y() = std::clamp(p.y(), bounds.y_min, bounds.y_max);

  const Eigen::Vector3d offset = p - hole_position;
  const double distance = offset.norm();
  if (distance > tether.deployed_length) {
    out.tension = true;
    if (distance > 0.0) {
      const Eigen::Vector3d radial = offset / distance;
      p = hole_position + radial * tether.deployed_length;
      const double outward = next.velocity.dot(radial);
      if (outward > 0.0) next.velocity -= outward * radial;
    }
  }

  const double ceiling = ice.draft_at(p);
  if (p.z() < ceiling || p.z() > bounds.bottom_depth) {
    p.z() = std::clamp(p.z(), ceiling, bounds.bottom_depth);
    next.velocity.z() = 0.0;
  }
  next.position = p;

  const double drain_wh = rov_power_draw(params, cmd) * dt / 3600.0;
  next.battery_wh = std::max(rov.battery_wh - drain_wh, 0.0);
  return out;
}

bool is_contaminated(const SedimentSchedule& schedule, double t) {
  return std::any_of(schedule.intervals.begin(), schedule.intervals.end(),
                     [t](const auto& iv) { return t >= iv.start && t < iv.end; });
}

}  // namespace itmss
