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


// CSV artifacts of a mission run. Numbers are written in shortest
// round-trip form so a write followed by a read is lossless.

#ifndef ITMSS_CSV_HPP_
#define ITMSS_CSV_HPP_

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "itmss/events.hpp"
#include "itmss/sampling.hpp"

namespace itmss {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// t_s,ch4_nM,co2_uatm,valid,lag_s; invalid rows leave the gas columns empty.
void write_measurements_csv(std::ostream& out, std::span<const Measurement> rows);
std::vector<Measurement> read_measurements_csv(std::istream& in);

/// t_s,x_m,y_m,z_m
void write_track_csv(std::ostream& out, std::span<const TrackPoint> rows);
std::vector<TrackPoint> read_track_csv(std::istream& in);

/// t_s,flow_m3s; one row per change of pump flow.
void write_flow_csv(std::ostream& out, const FlowHistory& rows);
FlowHistory read_flow_csv(std::istream& in);

/// t_s,kind,detail
void write_events_csv(std::ostream& out, std::span<const Event> rows);

/// t_s,intake_t_s,x_m,y_m,z_m,located,ch4_nM,co2_uatm,valid
void write_geo_csv(std::ostream& out, std::span<const GeoSample> rows);

std::string format_number(double v);

}  // namespace itmss

#endif  // ITMSS_CSV_HPP_
