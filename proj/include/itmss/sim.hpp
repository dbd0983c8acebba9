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


// Fixed-step orchestration of the vehicle, winch, tube and analyzer.

#ifndef ITMSS_SIM_HPP_
#define ITMSS_SIM_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "itmss/commands.hpp"
#include "itmss/config.hpp"
#include "itmss/environment.hpp"
#include "itmss/events.hpp"
#include "itmss/sampling.hpp"
#include "itmss/script.hpp"
#include "itmss/winch.hpp"

namespace itmss {

struct WorldState {
  double time{};
  std::uint64_t steps{};
  RovState rov;
  std::array<double, 4> thrust{};
  WinchState winch;
  TetherState tether;
  Tube tube;
  bool pump_on{true};
  double pump_flow{};  // operating-point flow while the pump runs
  bool contaminated{false};
  Analyzer analyzer;
  std::vector<Measurement> measurements;
  std::vector<TrackPoint> track;
  FlowHistory flow_history;
  EventLog events;
  bool battery_low_reported{false};
  bool stopped{false};

  WorldState(const ScenarioConfig& cfg);
};

/// Newly produced artifacts of a single step.
struct StepOutput {
  std::size_t first_new_measurement{};
  std::size_t first_new_event{};
};

class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  const WorldState& world() const { return world_; }

  /// Applies `commands` in order, then advances exactly one dt.
  StepOutput step(std::span<const Command> commands);

  /// Mission over: duration reached, vehicle battery flat, or stopped.
  bool finished() const;

  /// Applies a command without stepping (used by step and by live sources).
  void apply(const Command& cmd);

 private:
  ScenarioConfig cfg_;
  WorldState world_;
  int sample_steps_;
};

struct RunResult {
  std::vector<Measurement> measurements;
  std::vector<TrackPoint> track;
  std::vector<Event> events;
  FlowHistory flow_history;
  double end_time{};
};

/// Executes a scripted mission headless to the end.
RunResult run(const ScenarioConfig& cfg, std::span<const ScriptEntry> script);

/// Hands out script entries as simulated time passes.
class ScriptCursor {
 public:
  explicit ScriptCursor(std::span<const ScriptEntry> script) : script_(script) {}
  /// Commands with time <= t, in script order.
  std::vector<Command> due(double t);

 private:
  std::span<const ScriptEntry> script_;
  std::size_t next_{0};
};

/// FNV-1a over the bit patterns of the dynamic state; equal states hash equal.
std::uint64_t world_hash(const WorldState& world);

/// Violated component invariants, empty when the world is consistent.
std::vector<std::string> check_invariants(const WorldState& world,
                                          const ScenarioConfig& cfg);

/// Operating-point flow of the configured pump and system curve.
double configured_flow(const ScenarioConfig& cfg);

}  // namespace itmss

#endif  // ITMSS_SIM_HPP_
