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


// Water path from the vehicle inlet to the topside analyzer, and the batch
// lag correction that puts measurements back where the water came from.

#ifndef ITMSS_SAMPLING_HPP_
#define ITMSS_SAMPLING_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "itmss/environment.hpp"
#include "itmss/hydro.hpp"

namespace itmss {

struct Parcel {
  double intake_time{};
  Eigen::Vector3d intake_position{Eigen::Vector3d::Zero()};
  Concentration concentration;
  bool contaminated{false};
};

/// Plug-flow tube. Parcels are tagged with the pumped-volume odometer at
/// intake; a parcel has travelled (odometer - tag) / area along the tube, so
/// overtaking is impossible by construction.
class Tube {
 public:
  explicit Tube(const PumpSpec& pump, double dispersion_sigma_s = 0.0);

  void set_flow(double flow) { flow_ = flow; }
  double flow() const { return flow_; }
  double length() const { return length_; }
  double area() const { return area_; }
  double volume() const { return area_ * length_; }

  /// Inserts a parcel at the inlet. No-op while the flow is zero.
  void insert(const Parcel& parcel);

  /// Moves the water column by flow * dt and returns parcels that reached
  /// the outlet, oldest first.
  std::vector<Parcel> advect(double dt);

  /// Fills the tube with copies of `parcel` as if the pump had been running
  /// at the current flow with one intake every `dt`, intake times ending at
  /// `parcel.intake_time`.
  void prefill(const Parcel& parcel, double dt);

  std::size_t size() const { return parcels_.size(); }
  /// Distance of the i-th queued parcel from the inlet (0 = newest end).
  double distance_along(std::size_t i) const;
  const Parcel& parcel(std::size_t i) const { return parcels_[i].parcel; }

 private:
  struct Slot {
    Parcel parcel;
    double volume_tag;
  };

  Concentration smeared(const Parcel& leaving) const;

  double area_;
  double length_;
  double flow_{0.0};
  double odometer_{0.0};
  double dispersion_sigma_s_;
  std::deque<Slot> parcels_;  // front is oldest, nearest the outlet
  std::deque<Parcel> recent_;  // emitted parcels kept for smearing
};

/// Samples the gas field at the inlet and inserts one parcel for this step.
void intake(Tube& tube, const Eigen::Vector3d& rov_position,
            const GasField& field, double t, bool contaminated);

struct AnalyzerSpec {
  double sample_interval{1.0};        // s
  double response_time_constant{5.0};  // s
  Concentration noise_sigma{2.0, 10.0};
  std::uint64_t seed{1};
};

struct Measurement {
  double time{};
  std::optional<double> ch4;  // nM, withheld when invalid
  std::optional<double> co2;  // uatm
  bool valid{false};
  double transit_lag{};

  bool operator==(const Measurement&) const = default;
};

/// First-order instrument response with additive Gaussian noise, sampled on
/// a fixed cadence.
class Analyzer {
 public:
  explicit Analyzer(const AnalyzerSpec& spec);

  /// Feeds parcels that reached the analyzer during the step ending at `t`
  /// and returns any samples falling due at or before `t`.
  std::vector<Measurement> analyze(std::span<const Parcel> emitted, double t);

  double next_sample_time() const { return next_sample_time_; }

 private:
  AnalyzerSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
  double last_time_{0.0};
  double next_sample_time_;
  Concentration filtered_;
  bool primed_{false};
  std::uint64_t samples_taken_{0};
  std::optional<Parcel> contributing_;
};

/// Piecewise-constant pump flow: each segment holds from t_start until the
/// next segment's t_start. The first segment extends back indefinitely.
struct FlowSegment {
  double t_start{};
  double flow{};
};
using FlowHistory = std::vector<FlowSegment>;

/// Intake time of water that reaches the analyzer at `t`, or nullopt when
/// the flow history never moved a full tube volume.
std::optional<double> intake_time_for(double t, const FlowHistory& history,
                                      double tube_volume);

struct TrackPoint {
  double time{};
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
};

struct GeoSample {
  double time{};
  double intake_time{};
  std::optional<Eigen::Vector3d> position;  // nullopt when the track does not cover intake_time
  std::optional<double> ch4;
  std::optional<double> co2;
  bool valid{false};
};

/// Maps each measurement back to its intake time and interpolates the track
/// there. Measurements whose intake precedes `mission_start` are dropped.
std::vector<GeoSample> lag_correct(std::span<const Measurement> series,
                                   std::span<const TrackPoint> track,
                                   const FlowHistory& flow,
                                   const PumpSpec& pump,
                                   double mission_start = 0.0);

std::optional<Eigen::Vector3d> interpolate_track(std::span<const TrackPoint> track,
                                                 double t);

}  // namespace itmss

#endif  // ITMSS_SAMPLING_HPP_
