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


#include "itmss/hydro.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace itmss {
namespace {

// Oracles below are written out by hand in long double, independent of the
// templated library code.
constexpr long double kPi = 3.141592653589793238462643383279502884L;

TEST(Drag, DefaultsGive45Newtons) {
  const long double oracle = 0.5L * 1.05L * 0.086L * 997.0L * 1.0L * 1.0L;
  EXPECT_NEAR(drag_force(HydroParams{}, 1.0), static_cast<double>(oracle), 1e-12);
  EXPECT_NEAR(drag_force(HydroParams{}, 1.0), 45.0, 0.1);
}

TEST(Drag, ZeroSpeedAndScaling) {
  EXPECT_EQ(drag_force(HydroParams{}, 0.0), 0.0);
  const double f1 = drag_force(HydroParams{}, 0.7);
  EXPECT_NEAR(drag_force(HydroParams{}, 1.4), 4.0 * f1, 1e-12);
  EXPECT_THROW(drag_force(HydroParams{}, -0.1), std::domain_error);
}

TEST(Torque, FullDrumOracle) {
  const long double oracle = 0.762L + 0.168L * 45.0L;
  EXPECT_NEAR(operating_torque(SpoolGeometry{}, 45.0, 0.168), static_cast<double>(oracle), 1e-12);
  EXPECT_NEAR(operating_torque(SpoolGeometry{}, 45.0, 0.168), 8.32, 0.01);
}

TEST(Torque, ZeroDragIsFriction) {
  EXPECT_DOUBLE_EQ(operating_torque(SpoolGeometry{}, 0.0, 0.168), 0.762);
}

TEST(Torque, RadiusOutsideSpoolRejected) {
  EXPECT_THROW(operating_torque(SpoolGeometry{}, 45.0, 0.05), std::domain_error);
  EXPECT_THROW(operating_torque(SpoolGeometry{}, 45.0, 0.2), std::domain_error);
  EXPECT_THROW(operating_torque(SpoolGeometry{}, -1.0, 0.1), std::domain_error);
}

TEST(Speed, BareDrumOracle) {
  EXPECT_NEAR(required_speed(1.0, 0.0952), static_cast<double>(1.0L / 0.0952L), 1e-12);
  EXPECT_NEAR(required_speed(1.0, 0.0952), 10.5, 0.05);
  EXPECT_THROW(required_speed(1.0, 0.0), std::domain_error);
  EXPECT_EQ(required_speed(0.0, 0.1), 0.0);
}

TEST(Power, ChainOracle) {
  const long double f = 0.5L * 1.05L * 0.086L * 997.0L;
  const long double tau = 0.762L + 0.168L * f;
  const long double omega = 1.0L / 0.0952L;
  const long double p = 4.0L * omega * tau;
  const double omega_d = required_speed(1.0, 0.0952);
  const double tau_d = operating_torque(SpoolGeometry{}, drag_force(HydroParams{}, 1.0), 0.168);
  EXPECT_NEAR(rated_power_requirement(omega_d, tau_d), static_cast<double>(p), 1e-9);
  EXPECT_NEAR(rated_power_requirement(omega_d, tau_d), 349.4, 0.5);
  EXPECT_LT(rated_power_requirement(omega_d, tau_d), MotorSpec{}.rated_power);
}

TEST(Power, MonotoneInBothArguments) {
  EXPECT_LT(rated_power_requirement(5.0, 2.0), rated_power_requirement(5.1, 2.0));
  EXPECT_LT(rated_power_requirement(5.0, 2.0), rated_power_requirement(5.0, 2.1));
  EXPECT_THROW(rated_power_requirement(-1.0, 2.0), std::domain_error);
}

TEST(Spool, EffectiveRadiusEndpointsAndMidpoint) {
  const SpoolGeometry s;
  EXPECT_DOUBLE_EQ(effective_radius(s, 0.0), s.radius_empty);
  EXPECT_DOUBLE_EQ(effective_radius(s, s.capacity), s.radius_full);
  EXPECT_NEAR(effective_radius(s, 75.0), 0.5 * (0.0952 + 0.168), 1e-15);
  EXPECT_THROW(effective_radius(s, 151.0), std::domain_error);
}

TEST(Motor, LiftAt27PercentDuty) {
  // 4.11 kg hanging from the full drum.
  const double needed = 4.11 * 9.81 * 0.168;
  EXPECT_NEAR(needed, 6.77, 0.005);
  const MotorSpec m;
  const long double oracle = 0.27L * (4.0L * 372.85L / 188.5L) * 10.0L * 0.85L;
  EXPECT_NEAR(drum_stall_torque(m, 0.27), static_cast<double>(oracle), 1e-9);
  EXPECT_GE(drum_stall_torque(m, 0.27), needed);
  EXPECT_GT(drum_speed_under_load(m, 0.27, needed), 0.0);
}

TEST(Motor, SpeedUnderLoadIsAffine) {
  const MotorSpec m;
  const double free = drum_speed_under_load(m, 1.0, 0.0);
  EXPECT_NEAR(free, 18.85, 1e-12);
  const double stall = drum_stall_torque(m, 1.0);
  EXPECT_NEAR(drum_speed_under_load(m, 1.0, 0.5 * stall), 0.5 * free, 1e-12);
  EXPECT_EQ(drum_speed_under_load(m, 1.0, stall), 0.0);
  EXPECT_EQ(drum_speed_under_load(m, 1.0, 2 * stall), 0.0);
  EXPECT_EQ(drum_speed_under_load(m, 0.0, 0.0), 0.0);
  EXPECT_THROW(drum_speed_under_load(m, 1.5, 0.0), std::domain_error);
}

TEST(Pump, QuadraticSystemCurveClosedForm) {
  // H0 (1 - Q/Qn) = hs + k Q^2 solved by the quadratic formula.
  PumpSpec p;
  const long double h0 = p.shutoff_head, qn = p.nominal_flow, hs = 4.0L, k = 1.5e9L;
  const long double a = k, b = h0 / qn, c = hs - h0;
  const long double q = (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
  const auto op = pump_operating_point<double>(
      p, [&](double f) { return 4.0 + 1.5e9 * f * f; });
  EXPECT_FALSE(op.no_flow);
  EXPECT_NEAR(op.flow, static_cast<double>(q), 1e-12);
  EXPECT_NEAR(op.head, 4.0 + 1.5e9 * op.flow * op.flow, 1e-6);
}

TEST(Pump, ZeroHeadGivesNominalFlow) {
  const auto op = pump_operating_point<double>(PumpSpec{}, [](double) { return 0.0; });
  EXPECT_DOUBLE_EQ(op.flow, 1.3e-4);
  EXPECT_FALSE(op.no_flow);
}

TEST(Pump, StaticHeadAboveShutoffIsNoFlow) {
  const auto op = pump_operating_point<double>(PumpSpec{}, [](double) { return 70.0; });
  EXPECT_TRUE(op.no_flow);
  EXPECT_EQ(op.flow, 0.0);
}

TEST(Pump, RequiredHeadRangeStillFlows) {
  PumpSpec p;
  for (double h : {3.0, 4.0, 5.0}) {
    const auto op = pump_operating_point<double>(p, [h](double) { return h; });
    EXPECT_NEAR(op.flow, p.nominal_flow * (1.0 - h / p.shutoff_head), 1e-15);
    EXPECT_GT(op.flow, 0.0);
  }
}

TEST(Tube, VolumeAndTransit) {
  const PumpSpec p;
  const long double area = kPi * 0.00635L * 0.00635L / 4.0L;
  EXPECT_NEAR(tube_cross_section(p), static_cast<double>(area), 1e-18);
  EXPECT_NEAR(tube_volume(p), static_cast<double>(area * 150.0L), 1e-15);
  EXPECT_NEAR(tube_volume(p) * 1000.0, 4.75, 0.005);
  EXPECT_NEAR(tube_transit_time(p, 1.3e-4), static_cast<double>(area * 150.0L / 1.3e-4L), 1e-9);
  EXPECT_NEAR(tube_transit_time(p, 1.3e-4), 36.5, 0.05);
  EXPECT_THROW(tube_transit_time(p, 0.0), std::domain_error);
}

TEST(Battery, ConstantMaxCurrent) {
  const std::vector<DrawSegment> prof{{10.0 * 3600.0, 39.0}};
  const auto r = battery_endurance(BatterySpec{}, prof);
  EXPECT_TRUE(r.depleted);
  EXPECT_NEAR(r.seconds / 3600.0, 110.0 / 39.0, 1e-12);
  EXPECT_NEAR(r.seconds / 3600.0, 2.82, 0.01);
}

TEST(Battery, ProfileShorterThanCapacityNotDepleted) {
  const std::vector<DrawSegment> prof{{3600.0, 39.0}, {3600.0, 0.0}};
  const auto r = battery_endurance(BatterySpec{}, prof);
  EXPECT_FALSE(r.depleted);
  EXPECT_DOUBLE_EQ(r.seconds, 7200.0);
}

TEST(Battery, EmptyProfileAndNegativeCurrent) {
  EXPECT_EQ(battery_endurance(BatterySpec{}, {}).seconds, 0.0);
  const std::vector<DrawSegment> bad{{1.0, -1.0}};
  EXPECT_THROW(battery_endurance(BatterySpec{}, bad), std::domain_error);
}

TEST(Templates, FloatInstantiation) {
  HydroParamsT<float> h;
  EXPECT_NEAR(drag_force(h, 1.0f), 45.0146f, 1e-3f);
}

}  // namespace
}  // namespace itmss
