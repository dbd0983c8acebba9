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


#include "itmss/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace itmss {

Tube::Tube(const PumpSpec& pump, double dispersion_sigma_s)
    : area_(tube_cross_section(pump)),
      length_(pump.tube_length),
      dispersion_sigma_s_(dispersion_sigma_s) {}

void Tube::insert(const Parcel& parcel) {
  if (flow_ <= 0.0) return;
  parcels_.push_back({parcel, odometer_});
}

double Tube::distance_along(std::size_t i) const {
  return (odometer_ - parcels_[i].volume_tag) / area_;
}

std::vector<Parcel> Tube::advect(double dt) {
  std::vector<Parcel> out;
  if (flow_ <= 0.0) return out;
  odometer_ += flow_ * dt;
  const double threshold = volume() * (1.0 - 1e-12);
  while (!parcels_.empty() &&
         odometer_ - parcels_.front().volume_tag >= threshold) {
    Parcel leaving = parcels_.front().parcel;
    if (dispersion_sigma_s_ > 0.0) {
      const Parcel raw = leaving;
      leaving.concentration = smeared(raw);
      recent_.push_back(raw);
      const double horizon = raw.intake_time - 3.0 * dispersion_sigma_s_;
      while (!recent_.empty() && recent_.front().intake_time < horizon) {
        recent_.pop_front();
      }
    }
    parcels_.pop_front();
    out.push_back(std::move(leaving));
  }
  return out;
}

Concentration Tube::smeared(const Parcel& leaving) const {
  const double sigma = dispersion_sigma_s_;
  const double reach = 3.0 * sigma;
  double total = 0.0;
  Concentration acc;
  auto add = [&](const Parcel& p) {
    const double lag = p.intake_time - leaving.intake_time;
    if (std::abs(lag) > reach) return false;
    const double w = std::exp(-0.5 * (lag / sigma) * (lag / sigma));
    acc.ch4 += w * p.concentration.ch4;
    acc.co2 += w * p.concentration.co2;
    total += w;
    return true;
  };
  for (const Parcel& p : recent_) add(p);
  for (const Slot& slot : parcels_) {
    if (!add(slot.parcel) && slot.parcel.intake_time > leaving.intake_time) break;
  }
  return {acc.ch4 / total, acc.co2 / total};
}

void Tube::prefill(const Parcel& parcel, double dt) {
  if (flow_ <= 0.0 || dt <= 0.0) return;
  const double spacing = flow_ * dt;
  const auto count = static_cast<std::size_t>(std::ceil(volume() / spacing - 1e-9));
  for (std::size_t k = count; k-- > 0;) {
    Parcel p = parcel;
    p.intake_time = parcel.intake_time - static_cast<double>(k) * dt;
    parcels_.push_back({p, odometer_ - static_cast<double>(k) * spacing});
  }
}

void intake(Tube& tube, const Eigen::Vector3d& rov_position,
            const GasField& field, double t, bool contaminated) {
  if (tube.flow() <= 0.0) return;
  tube.insert({t, rov_position, gas_at(field, rov_position, t), contaminated});
}

Analyzer::Analyzer(const AnalyzerSpec& spec)
    : spec_(spec), rng_(spec.seed), next_sample_time_(spec.sample_interval) {}

std::vector<Measurement> Analyzer::analyze(std::span<const Parcel> emitted,
                                           double t) {
  const double dt = std::max(t - last_time_, 0.0);
  last_time_ = t;

  if (!emitted.empty()) {
    const double share = dt / static_cast<double>(emitted.size());
    const double tau = spec_.response_time_constant;
    const double alpha = tau > 0.0 ? 1.0 - std::exp(-share / tau) : 1.0;
    for (const Parcel& p : emitted) {
      if (!p.contaminated) {
        if (!primed_ || alpha == 1.0) {
          filtered_ = p.concentration;
          primed_ = true;
        } else {
          filtered_.ch4 += alpha * (p.concentration.ch4 - filtered_.ch4);
          filtered_.co2 += alpha * (p.concentration.co2 - filtered_.co2);
        }
      }
    }
    contributing_ = emitted.back();
  }

  std::vector<Measurement> out;
  const double eps = 1e-9 * std::max(1.0, t);
  while (t + eps >= next_sample_time_) {
    const double noise_ch4 = spec_.noise_sigma.ch4 * unit_(rng_);
    const double noise_co2 = spec_.noise_sigma.co2 * unit_(rng_);
    Measurement m;
    m.time = next_sample_time_;
    m.valid = contributing_.has_value() && !contributing_->contaminated && primed_;
    if (contributing_) m.transit_lag = m.time - contributing_->intake_time;
    if (m.valid) {
      m.ch4 = std::max(filtered_.ch4 + noise_ch4, 0.0);
      m.co2 = std::max(filtered_.co2 + noise_co2, 0.0);
    }
    out.push_back(m);
    ++samples_taken_;
    next_sample_time_ =
        static_cast<double>(samples_taken_ + 1) * spec_.sample_interval;
  }
  return out;
}

std::optional<double> intake_time_for(double t, const FlowHistory& history,
                                      double tube_volume) {
  if (history.empty()) return std::nullopt;
  auto it = std::upper_bound(
      history.begin(), history.end(), t,
      [](double value, const FlowSegment& seg) { return value < seg.t_start; });
  std::size_t i = it == history.begin()
                      ? 0
                      : static_cast<std::size_t>(it - history.begin()) - 1;
  double remaining = tube_volume;
  double cursor = t;
  while (true) {
    const double start = i == 0 ? -std::numeric_limits<double>::infinity()
                                : history[i].t_start;
    const double q = history[i].flow;
    if (q > 0.0) {
      const double available = (cursor - start) * q;
      if (available >= remaining) return cursor - remaining / q;
      remaining -= available;
    }
    if (i == 0) return std::nullopt;
    cursor = start;
    --i;
  }
}

std::optional<Eigen::Vector3d> interpolate_track(
    std::span<const TrackPoint> track, double t) {
  if (track.empty() || t < track.front().time || t > track.back().time) {
    return std::nullopt;
  }
  auto it = std::upper_bound(
      track.begin(), track.end(), t,
      [](double value, const TrackPoint& p) { return value < p.time; });
  if (it == track.end()) return track.back().position;
  const TrackPoint& hi = *it;
  const TrackPoint& lo = *(it - 1);
  const double span = hi.time - lo.time;
  if (span <= 0.0) return lo.position;
  const double w = (t - lo.time) / span;
  return ((1.0 - w) * lo.position + w * hi.position).eval();
}

std::vector<GeoSample> lag_correct(std::span<const Measurement> series,
                                   std::span<const TrackPoint> track,
                                   const FlowHistory& flow, const PumpSpec& pump,
                                   double mission_start) {
  const double volume = tube_volume(pump);
  std::vector<GeoSample> out;
  out.reserve(series.size());
  for (const Measurement& m : series) {
    const auto intake_t = intake_time_for(m.time, flow, volume);
    if (!intake_t || *intake_t < mission_start) continue;
    GeoSample g;
    g.time = m.time;
    g.intake_time = *intake_t;
    g.position = interpolate_track(track, *intake_t);
    g.ch4 = m.ch4;
    g.co2 = m.co2;
    g.valid = m.valid;
    out.push_back(g);
  }
  return out;
}

}  // namespace itmss
