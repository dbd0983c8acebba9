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


#include "itmss/sizing.hpp"

#include <cmath>

#include <fmt/format.h>


namespace itmss {

std::vector<DrawSegment> duty_draw_profile(const DutyProfile& p) {
  std::vector<DrawSegment> out;
  double t = 0.0;
  const double on = p.duty_cycle * p.cycle_period_s;
  const double off = p.cycle_period_s - on;
  while (t < p.horizon_s) {
    const double left = p.horizon_s - t;
    if (on > 0.0) out.push_back({std::min(on, left), p.draw_current_a});
    t += std::min(on, left);
    if (t >= p.horizon_s) break;
    if (off > 0.0) out.push_back({std::min(off, p.horizon_s - t), 0.0});
    t += std::min(off, p.horizon_s - t);
  }
  return out;
}

SizingReport compute_sizing(const ScenarioConfig& cfg) {
  SizingReport r;
  const SpoolGeometry& spool = cfg.spool;
  r.line_speed = cfg.design_line_speed;
  r.drag = drag_force(cfg.hydro, r.line_speed);
  r.torque = operating_torque(spool, r.drag, spool.radius_full);
  r.omega = required_speed(r.line_speed, spool.radius_empty);
  r.power = rated_power_requirement(r.omega, r.torque);
  r.rated_power = cfg.motor.rated_power;
  r.power_pass = r.power <= r.rated_power;

  auto variant = [&](const char* label, double speed_r, double torque_r) {
    const double omega = required_speed(r.line_speed, speed_r);
    const double torque = operating_torque(spool, r.drag, torque_r);
    const double power = rated_power_requirement(omega, torque);
    return PowerVariant{label, speed_r, torque_r, omega, torque, power,
                        power <= r.rated_power};
  };
  r.variants = {
      variant("speed at bare drum, torque at full drum", spool.radius_empty, spool.radius_full),
      variant("bare drum throughout", spool.radius_empty, spool.radius_empty),
      variant("full drum throughout", spool.radius_full, spool.radius_full),
  };

  r.stall_torque_full_duty = drum_stall_torque(cfg.motor, 1.0);
  r.no_load_drum_speed = drum_speed_under_load(cfg.motor, 1.0, 0.0);

  r.pump_point = pump_operating_point<double>(
      cfg.pump, [&cfg](double q) { return cfg.system.head(q); });
  r.flow_at_required_head =
      pump_operating_point<double>(cfg.pump, [&cfg](double q) {
        return cfg.pump.required_head_max + cfg.system.head(q);
      }).flow;
  r.tube_volume = tube_volume(cfg.pump);
  r.transit_time = r.pump_point.no_flow
                       ? std::numeric_limits<double>::infinity()
                       : tube_transit_time(cfg.pump, r.pump_point.flow);

  const DrawSegment constant{cfg.duty_profile.horizon_s, cfg.motor.max_current};
  r.constant_draw = battery_endurance(cfg.battery, std::span(&constant, 1));
  const auto profile = duty_draw_profile(cfg.duty_profile);
  r.duty_profile = battery_endurance(cfg.battery, profile);
  r.required_hours = cfg.duty_profile.required_hours;
  r.endurance_pass = r.duty_profile.seconds >= r.required_hours * 3600.0;

  r.ambient_temperature = cfg.ambient_temperature;
  r.min_operating_temperature = cfg.min_operating_temperature;
  r.temperature_pass = cfg.ambient_temperature >= cfg.min_operating_temperature;
  return r;
}

namespace {
const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string hours(const EnduranceResult& e) {
  return fmt::format("{:.2f} h{}", e.seconds / 3600.0,
                     e.depleted ? "" : " (not depleted within profile)");
}
}  // namespace

std::string format_sizing(const SizingReport& r) {
  std::string s;
  auto line = [&s](const std::string& text) { s += text + "\n"; };
  line("ITMSS sizing report");
  line("");
  line("winch load chain");
  line(fmt::format("  drag force         F_D   = {:.1f} N at {:.2f} m/s", r.drag, r.line_speed));
  line(fmt::format("  operating torque   tau_o = {:.2f} N*m (full-drum radius)", r.torque));
  line(fmt::format("  required speed     Omega = {:.1f} rad/s (bare-drum radius)", r.omega));
  line(fmt::format("  rated power        P     = 4*Omega*tau_o = {:.1f} W vs motor {:.2f} W  {}",
                   r.power, r.rated_power, verdict(r.power_pass)));
  line("  radius pairings:");
  for (const auto& v : r.variants) {
    line(fmt::format("    {:<42} Omega {:6.2f} rad/s  tau {:5.2f} N*m  P {:6.1f} W  {}",
                     v.label, v.omega, v.torque, v.power, verdict(v.pass)));
  }
  line(fmt::format("  drum stall torque at full duty {:.1f} N*m, no-load drum speed {:.2f} rad/s",
                   r.stall_torque_full_duty, r.no_load_drum_speed));
  line("");
  line("sampling line");
  if (r.pump_point.no_flow) {
    line(fmt::format("  pump operating point: NO FLOW (system head {:.2f} m at zero flow)",
                     r.pump_point.head));
  } else {
    line(fmt::format("  pump operating point: {:.4g} m^3/s ({:.3f} L/s) at {:.2f} m head",
                     r.pump_point.flow, r.pump_point.flow * 1000.0, r.pump_point.head));
  }
  line(fmt::format("  flow against required head: {:.4g} m^3/s  {}", r.flow_at_required_head,
                   verdict(r.flow_at_required_head > 0.0)));
  line(fmt::format("  tube volume {:.3f} L, transit time {:.1f} s", r.tube_volume * 1000.0,
                   r.transit_time));
  line("");
  line("ITMSS battery");
  line(fmt::format("  constant max-current draw: {}", hours(r.constant_draw)));
  line(fmt::format("  duty-cycle profile: {} vs required {:.1f} h  {}", hours(r.duty_profile),
                   r.required_hours, verdict(r.endurance_pass)));
  line("");
  line(fmt::format("temperature envelope: ambient {:.1f} C, minimum {:.1f} C  {}",
                   r.ambient_temperature, r.min_operating_temperature,
                   verdict(r.temperature_pass)));
  return s;
}

}  // namespace itmss
