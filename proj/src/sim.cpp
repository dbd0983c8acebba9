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


#include "itmss/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace itmss {

double configured_flow(const ScenarioConfig& cfg) {
  const auto op = pump_operating_point<double>(
      cfg.pump, [&cfg](double q) { return cfg.system.head(q); });
  return op.no_flow ? 0.0 : op.flow;
}

namespace {
// The mission seed is the only seed; the analyzer spec copy follows it.
AnalyzerSpec seeded(AnalyzerSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}
}  // namespace

WorldState::WorldState(const ScenarioConfig& cfg)
    : tube(cfg.pump, cfg.dispersion_sigma), analyzer(seeded(cfg.analyzer, cfg.seed)) {
  rov.position = cfg.rov_start;
  rov.heading = cfg.rov_heading;
  rov.battery_wh = cfg.rov.battery_capacity_wh;
  rov.max_speed = cfg.rov.max_speed;
  winch.wound_length = cfg.spool.capacity - cfg.initial_deployed;
  tether = update_tether(cfg.spool, winch.wound_length, rov.position, cfg.hole);
  pump_on = cfg.pump_on;
  pump_flow = configured_flow(cfg);
  const double flow = pump_on ? pump_flow : 0.0;
  tube.set_flow(flow);
  // Water standing in the line at launch was drawn at the start position.
  tube.prefill({0.0, rov.position, gas_at(cfg.gas, rov.position, 0.0), false}, cfg.dt);
  flow_history.push_back({0.0, flow});
  contaminated = is_contaminated(cfg.sediment, 0.0);
  if (cfg.duration > 0.0) track.push_back({0.0, rov.position});
}

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), world_(cfg_), sample_steps_(steps_per_sample(cfg_)) {}

bool Simulation::finished() const {
  return world_.stopped || world_.time >= cfg_.duration - 1e-9 ||
         world_.rov.battery_wh <= 0.0;
}

void Simulation::apply(const Command& cmd) {
  WorldState& w = world_;
  const double now = w.time;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, WinchSlider>) {
          w.winch = apply_command(w.winch, cfg_.controller, c.value, &w.events, now);
        } else if constexpr (std::is_same_v<T, RovThrust>) {
          bool clamped = false;
          for (std::size_t i = 0; i < 4; ++i) {
            const double v = std::clamp(c.axes[i], -1.0, 1.0);
            clamped = clamped || v != c.axes[i] || std::isnan(c.axes[i]);
            w.thrust[i] = std::isnan(c.axes[i]) ? 0.0 : v;
          }
          if (clamped) w.events.add(now, EventKind::kClamp, "rov thrust clamped to [-1, 1]");
        } else if constexpr (std::is_same_v<T, EStop>) {
          w.winch = engage_estop(w.winch, &w.events, now);
        } else if constexpr (std::is_same_v<T, EStopReset>) {
          w.winch = reset_estop(w.winch, &w.events, now);
        } else if constexpr (std::is_same_v<T, PumpPower>) {
          if (c.on == w.pump_on) return;
          w.pump_on = c.on;
          const double flow = c.on ? w.pump_flow : 0.0;
          w.tube.set_flow(flow);
          if (!w.flow_history.empty() && w.flow_history.back().t_start == now) {
            w.flow_history.back().flow = flow;
          } else {
            w.flow_history.push_back({now, flow});
          }
        } else if constexpr (std::is_same_v<T, BreakerSet>) {
          w.winch = set_breaker(w.winch, c.open);
        } else {
          w.stopped = true;
        }
      },
      cmd);
}

StepOutput Simulation::step(std::span<const Command> commands) {
  WorldState& w = world_;
  StepOutput out{w.measurements.size(), w.events.size()};
  for (const Command& cmd : commands) apply(cmd);
  if (finished()) return out;

  const double dt = cfg_.dt;
  const double t_end = static_cast<double>(w.steps + 1) * dt;
  const bool was_taut = w.tether.taut;

  w.winch = tick_controller(w.winch, cfg_.controller, dt);

  // Quasi-static load: reeling against a taut tether drags the vehicle at
  // line speed; otherwise only spool friction.
  const double radius = effective_radius(cfg_.spool, w.winch.wound_length);
  double drag = 0.0;
  if (w.winch.current_duty > 0.0 && w.tether.taut) {
    drag = drag_force(cfg_.hydro, std::abs(w.winch.drum_speed) * radius);
  }
  const double load = operating_torque(cfg_.spool, drag, radius);
  w.winch = step_dynamics(w.winch, cfg_.spool, cfg_.motor, load, dt, &w.events, t_end);

  w.tether = update_tether(cfg_.spool, w.winch.wound_length, w.rov.position, cfg_.hole);
  const RovStep moved = step_rov(w.rov, cfg_.rov, w.thrust, cfg_.ice, cfg_.bounds,
                                 w.tether, cfg_.hole, dt);
  w.rov = moved.rov;
  w.tether = update_tether(cfg_.spool, w.winch.wound_length, w.rov.position, cfg_.hole);
  const bool taut_now = moved.tension || w.tether.taut;
  if (taut_now && !was_taut) {
    w.events.add(t_end, EventKind::kTension, "tether taut");
  }

  const bool dirty = is_contaminated(cfg_.sediment, t_end);
  if (dirty != w.contaminated) {
    w.events.add(t_end, EventKind::kContamination, dirty ? "start" : "end");
    w.contaminated = dirty;
  }

  const auto emitted = w.tube.advect(dt);
  intake(w.tube, w.rov.position, cfg_.gas, t_end, dirty);
  auto samples = w.analyzer.analyze(emitted, t_end);
  w.measurements.insert(w.measurements.end(), samples.begin(), samples.end());

  w.steps += 1;
  w.time = t_end;
  if (w.steps % static_cast<std::uint64_t>(cfg_.track_decimation) == 0) {
    w.track.push_back({w.time, w.rov.position});
  }
  if (!w.battery_low_reported &&
      w.rov.battery_wh <= cfg_.battery_low_fraction * cfg_.rov.battery_capacity_wh) {
    w.events.add(w.time, EventKind::kBatteryLow,
                 w.rov.battery_wh <= 0.0 ? "depleted" : "below threshold");
    w.battery_low_reported = true;
  }
  return out;
}

std::vector<Command> ScriptCursor::due(double t) {
  std::vector<Command> out;
  while (next_ < script_.size() && script_[next_].time <= t) {
    out.push_back(script_[next_].command);
    ++next_;
  }
  return out;
}

RunResult run(const ScenarioConfig& cfg, std::span<const ScriptEntry> script) {
  Simulation sim(cfg);
  ScriptCursor cursor(script);
  const double eps = 1e-9;
  while (!sim.finished()) {
    const auto cmds = cursor.due(sim.world().time + eps);
    sim.step(cmds);
  }
  const WorldState& w = sim.world();
  RunResult result;
  result.measurements = w.measurements;
  result.track = w.track;
  result.events = w.events.events();
  result.flow_history = w.flow_history;
  result.end_time = w.time;
  return result;
}

namespace {

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xffu;
      hash_ *= 1099511628211ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(bool v) { add(static_cast<std::uint64_t>(v)); }
  void add(const Eigen::Vector3d& v) {
    for (int i = 0; i < 3; ++i) add(v[i]);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_{1469598103934665603ull};
};

}  // namespace

std::uint64_t world_hash(const WorldState& w) {
  Fnv1a h;
  h.add(w.time);
  h.add(w.steps);
  h.add(w.rov.position);
  h.add(w.rov.velocity);
  h.add(w.rov.heading);
  h.add(w.rov.battery_wh);
  for (double a : w.thrust) h.add(a);
  h.add(w.winch.target_duty);
  h.add(w.winch.current_duty);
  h.add(w.winch.drum_speed);
  h.add(w.winch.wound_length);
  h.add(w.winch.estopped);
  h.add(w.winch.breaker_open);
  h.add(w.tether.slack);
  h.add(w.tether.taut);
  h.add(static_cast<std::uint64_t>(w.tube.size()));
  h.add(w.pump_on);
  h.add(static_cast<std::uint64_t>(w.measurements.size()));
  for (const auto& m : w.measurements) {
    h.add(m.time);
    h.add(m.ch4.value_or(-1.0));
    h.add(m.co2.value_or(-1.0));
    h.add(m.valid);
  }
  h.add(static_cast<std::uint64_t>(w.events.size()));
  return h.value();
}

std::vector<std::string> check_invariants(const WorldState& w,
                                          const ScenarioConfig& cfg) {
  std::vector<std::string> bad;
  auto expect = [&bad](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };
  const double tol = 1e-9;
  expect(std::abs(w.winch.current_duty) <= cfg.controller.max_duty + tol,
         "winch duty exceeds max_duty");
  expect(w.winch.wound_length >= 0.0 && w.winch.wound_length <= cfg.spool.capacity,
         "wound length outside [0, capacity]");
  expect(!w.winch.estopped || w.winch.target_duty == 0.0, "e-stopped with nonzero target");
  expect(std::abs(w.tether.deployed_length -
                  (cfg.spool.capacity - w.winch.wound_length)) <= tol,
         "deployed length inconsistent with wound length");
  expect(std::abs(w.tether.slack -
                  (w.tether.deployed_length - w.tether.straight_line_distance)) <= tol,
         "slack inconsistent");
  expect(w.tether.taut == (w.tether.slack <= kTautTolerance), "taut flag inconsistent with slack");
  const double draft = cfg.ice.draft_at(w.rov.position);
  expect(w.rov.position.z() >= draft - tol &&
             w.rov.position.z() <= cfg.bounds.bottom_depth + tol,
         "vehicle outside the water column");
  const double one_step =
      (cfg.rov.max_speed + cfg.motor.no_load_speed / cfg.motor.gear_ratio *
                               cfg.spool.radius_full) * cfg.dt + draft;
  expect(w.tether.straight_line_distance <= w.tether.deployed_length + one_step,
         "vehicle beyond tether reach");
  expect(w.rov.battery_wh >= 0.0 && w.rov.battery_wh <= cfg.rov.battery_capacity_wh,
         "battery out of range");
  for (std::size_t i = 0; i < w.tube.size(); ++i) {
    const double d = w.tube.distance_along(i);
    if (d < -tol || d > w.tube.length() + tol) {
      bad.emplace_back("parcel outside tube");
      break;
    }
    if (i > 0 && !(d < w.tube.distance_along(i - 1))) {
      bad.emplace_back("parcels out of order");
      break;
    }
  }
  for (std::size_t i = 1; i < w.measurements.size(); ++i) {
    if (w.measurements[i].time < w.measurements[i - 1].time) {
      bad.emplace_back("measurement times decrease");
      break;
    }
  }
  const auto& ev = w.events.events();
  for (std::size_t i = 1; i < ev.size(); ++i) {
    if (ev[i].time < ev[i - 1].time) {
      bad.emplace_back("event times decrease");
      break;
    }
  }
  return bad;
}

}  // namespace itmss
