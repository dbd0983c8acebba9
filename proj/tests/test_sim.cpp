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

#include <gtest/gtest.h>

#include <random>

namespace itmss {
namespace {

ScenarioConfig short_mission(double duration) {
  ScenarioConfig c = default_scenario();
  c.duration = duration;
  c.sediment.intervals.clear();
  return c;
}

TEST(Sim, DeterministicForEqualSeeds) {
  const ScenarioConfig c = default_scenario();
  const auto script = parse_script(default_arc_script());
  const RunResult a = run(c, script);
  const RunResult b = run(c, script);
  EXPECT_EQ(a.measurements, b.measurements);
  EXPECT_EQ(a.events, b.events);
  ScenarioConfig other = c;
  other.seed = 99;
  EXPECT_NE(run(other, script).measurements, a.measurements);
}

TEST(Sim, InvariantsHoldThroughTheArcMission) {
  const ScenarioConfig c = default_scenario();
  const auto script = parse_script(default_arc_script());
  Simulation sim(c);
  ScriptCursor cursor(script);
  while (!sim.finished()) {
    sim.step(cursor.due(sim.world().time + 1e-9));
    const auto bad = check_invariants(sim.world(), c);
    ASSERT_TRUE(bad.empty()) << sim.world().time << ": " << bad.front();
  }
  EXPECT_NEAR(sim.world().time, 3600.0, 1e-6);
  EXPECT_EQ(sim.world().steps, 180000u);
}

TEST(Sim, InvariantsUnderRandomCommands) {
  ScenarioConfig c = short_mission(600.0);
  c.sediment.intervals = {{100.0, 200.0}};
  Simulation sim(c);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 300);
  std::uniform_real_distribution<double> axis(-1.5, 1.5);
  std::uniform_int_distribution<int> slider(-150, 150);
  while (!sim.finished()) {
    std::vector<Command> cmds;
    switch (pick(rng)) {
      case 0: cmds.push_back(EStop{}); break;
      case 1: cmds.push_back(EStopReset{}); break;
      case 2: cmds.push_back(PumpPower{false}); break;
      case 3: cmds.push_back(PumpPower{true}); break;
      case 4: cmds.push_back(BreakerSet{true}); break;
      case 5: cmds.push_back(BreakerSet{false}); break;
      case 6: case 7: case 8: cmds.push_back(WinchSlider{slider(rng)}); break;
      case 9: case 10: cmds.push_back(RovThrust{{axis(rng), axis(rng), axis(rng), axis(rng)}}); break;
      default: break;
    }
    sim.step(cmds);
    const auto bad = check_invariants(sim.world(), c);
    ASSERT_TRUE(bad.empty()) << sim.world().time << ": " << bad.front();
  }
}

TEST(Sim, EmptyMissionSamplesBackground) {
  const RunResult r = run(short_mission(120.0), {});
  ASSERT_EQ(r.measurements.size(), 120u);
  for (const auto& m : r.measurements) {
    ASSERT_TRUE(m.valid);
    EXPECT_NEAR(*m.ch4, 4.0, 10.0);
  }
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.track.front().position, r.track.back().position);
  EXPECT_EQ(r.track.size(), 120u * 5 + 1);
}

TEST(Sim, BatteryDepletionEndsMissionNearOneHour) {
  ScenarioConfig c = short_mission(7200.0);
  const auto script = parse_script("t=0 rov thrust 1 0 0 0.2\n");
  const RunResult r = run(c, script);
  // 266 Wh at 266 W.
  EXPECT_NEAR(r.end_time, 3600.0, 1.0);
  int low = 0;
  for (const auto& e : r.events) low += e.kind == EventKind::kBatteryLow;
  EXPECT_EQ(low, 1);
}

TEST(Sim, ContaminationWindowProducesGapAndEvents) {
  ScenarioConfig c = short_mission(300.0);
  c.sediment.intervals = {{100.0, 160.0}};
  const RunResult r = run(c, {});
  int invalid = 0;
  for (const auto& m : r.measurements) invalid += !m.valid;
  // Samples whose water was drawn during the window are dropped.
  EXPECT_EQ(invalid, 60);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(r.events[0].detail, "start");
  EXPECT_EQ(r.events[1].detail, "end");
  EXPECT_TRUE(r.measurements[135].valid);    // t = 136, water from before the window
  EXPECT_FALSE(r.measurements[136].valid);   // t = 137
  EXPECT_TRUE(r.measurements[200].valid);    // t = 201
}

TEST(Sim, EstopInMissionStopsWinch) {
  ScenarioConfig c = short_mission(30.0);
  const auto script = parse_script("t=0 winch slider -80\nt=10 winch estop\nt=10 winch slider -80\n");
  Simulation sim(c);
  ScriptCursor cursor(script);
  double stopped_at = -1;
  while (!sim.finished()) {
    sim.step(cursor.due(sim.world().time + 1e-9));
    if (sim.world().time > 10.0 && stopped_at < 0 && sim.world().winch.current_duty == 0.0) {
      stopped_at = sim.world().time;
    }
  }
  ASSERT_GT(stopped_at, 0.0);
  EXPECT_LE(stopped_at - 10.0, estop_tick_bound(c.controller) * c.dt + 1e-9);
  EXPECT_EQ(sim.world().events.count(EventKind::kEstop), 1u);
}

TEST(Sim, TetherTensionAndReelIn) {
  ScenarioConfig c = short_mission(120.0);
  const auto script = parse_script("t=0 rov thrust 1 0 0 0\nt=30 rov thrust 0 0 0 0\nt=30 winch slider 30\n");
  const RunResult r = run(c, script);
  int tension = 0;
  for (const auto& e : r.events) tension += e.kind == EventKind::kTension;
  EXPECT_GE(tension, 1);
  // 5 m deployed at launch, vehicle pulled home once reeling starts.
  EXPECT_LE(r.track.back().position.head<2>().norm(), 1.0);
}

TEST(Sim, PumpOffRecordsFlowHistory) {
  ScenarioConfig c = short_mission(100.0);
  const auto script = parse_script("t=20 pump power off\nt=50 pump power on\n");
  const RunResult r = run(c, script);
  ASSERT_EQ(r.flow_history.size(), 3u);
  EXPECT_EQ(r.flow_history[1].flow, 0.0);
  EXPECT_NEAR(r.flow_history[1].t_start, 20.0, 1e-9);
  // Water reaching the analyzer soon after the restart sat through the pause.
  EXPECT_NEAR(r.measurements[59].transit_lag, 36.56 + 30.0, 0.05);
  EXPECT_NEAR(r.measurements.back().transit_lag, 36.56, 0.05);
}

TEST(Sim, SimStopEndsEarly) {
  const RunResult r = run(short_mission(100.0), parse_script("t=12.5 sim stop\n"));
  EXPECT_NEAR(r.end_time, 12.5, 1e-9);
}

TEST(Sim, ConfiguredFlowMatchesPump) {
  ScenarioConfig c = default_scenario();
  EXPECT_DOUBLE_EQ(configured_flow(c), 1.3e-4);
  c.system.static_head = 6.0;
  EXPECT_NEAR(configured_flow(c), 1.3e-4 * (1 - 6.0 / 60.0), 1e-15);
  c.system.static_head = 61.0;
  EXPECT_EQ(configured_flow(c), 0.0);
}

}  // namespace
}  // namespace itmss
