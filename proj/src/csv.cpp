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


#include "itmss/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace itmss {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
    out.back().pop_back();
  }
  return out;
}

double parse_field(const std::string& s, int line, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw CsvError("line " + std::to_string(line) + ": bad value '" + s +
                   "' in column " + column);
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, int line, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_field(s, line, column);
}

// Reads the header, checks it, and calls `row` for each data line.
template <typename RowFn>
void read_rows(std::istream& in, const std::string& header, std::size_t columns,
               RowFn&& row) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw CsvError("unexpected header '" + line + "', want '" + header + "'");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(columns) + " columns");
    }
    row(fields, line_no);
  }
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_number(*v);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_measurements_csv(std::ostream& out, std::span<const Measurement> rows) {
  out << "t_s,ch4_nM,co2_uatm,valid,lag_s\n";
  for (const auto& m : rows) {
    out << format_number(m.time) << ',';
    write_optional(out, m.ch4);
    out << ',';
    write_optional(out, m.co2);
    out << ',' << (m.valid ? 1 : 0) << ',' << format_number(m.transit_lag) << '\n';
  }
}

std::vector<Measurement> read_measurements_csv(std::istream& in) {
  std::vector<Measurement> rows;
  read_rows(in, "t_s,ch4_nM,co2_uatm,valid,lag_s", 5,
            [&rows](const std::vector<std::string>& f, int line) {
              Measurement m;
              m.time = parse_field(f[0], line, "t_s");
              m.ch4 = parse_optional(f[1], line, "ch4_nM");
              m.co2 = parse_optional(f[2], line, "co2_uatm");
              if (f[3] != "0" && f[3] != "1") {
                throw CsvError("line " + std::to_string(line) + ": valid must be 0 or 1");
              }
              m.valid = f[3] == "1";
              m.transit_lag = parse_field(f[4], line, "lag_s");
              if (!rows.empty() && m.time < rows.back().time) {
                throw CsvError("line " + std::to_string(line) + ": rows not time-sorted");
              }
              rows.push_back(m);
            });
  return rows;
}

void write_track_csv(std::ostream& out, std::span<const TrackPoint> rows) {
  out << "t_s,x_m,y_m,z_m\n";
  for (const auto& p : rows) {
    out << format_number(p.time) << ',' << format_number(p.position.x()) << ','
        << format_number(p.position.y()) << ',' << format_number(p.position.z()) << '\n';
  }
}

std::vector<TrackPoint> read_track_csv(std::istream& in) {
  std::vector<TrackPoint> rows;
  read_rows(in, "t_s,x_m,y_m,z_m", 4, [&rows](const std::vector<std::string>& f, int line) {
    TrackPoint p;
    p.time = parse_field(f[0], line, "t_s");
    p.position = {parse_field(f[1], line, "x_m"), parse_field(f[2], line, "y_m"),
                  parse_field(f[3], line, "z_m")};
    if (!rows.empty() && p.time < rows.back().time) {
      throw CsvError("line " + std::to_string(line) + ": rows not time-sorted");
    }
    rows.push_back(p);
  });
  return rows;
}

void write_flow_csv(std::ostream& out, const FlowHistory& rows) {
  out << "t_s,flow_m3s\n";
  for (const auto& s : rows) {
    out << format_number(s.t_start) << ',' << format_number(s.flow) << '\n';
  }
}

FlowHistory read_flow_csv(std::istream& in) {
  FlowHistory rows;
  read_rows(in, "t_s,flow_m3s", 2, [&rows](const std::vector<std::string>& f, int line) {
    rows.push_back({parse_field(f[0], line, "t_s"), parse_field(f[1], line, "flow_m3s")});
  });
  return rows;
}

void write_events_csv(std::ostream& out, std::span<const Event> rows) {
  out << "t_s,kind,detail\n";
  for (const auto& e : rows) {
    std::string detail = e.detail;
    for (char& c : detail) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << format_number(e.time) << ',' << to_string(e.kind) << ',' << detail << '\n';
  }
}

void write_geo_csv(std::ostream& out, std::span<const GeoSample> rows) {
  out << "t_s,intake_t_s,x_m,y_m,z_m,located,ch4_nM,co2_uatm,valid\n";
  for (const auto& g : rows) {
    out << format_number(g.time) << ',' << format_number(g.intake_time) << ',';
    if (g.position) {
      out << format_number(g.position->x()) << ',' << format_number(g.position->y())
          << ',' << format_number(g.position->z()) << ",1,";
    } else {
      out << ",,,0,";
    }
    write_optional(out, g.ch4);
    out << ',';
    write_optional(out, g.co2);
    out << ',' << (g.valid ? 1 : 0) << '\n';
  }
}

}  // namespace itmss
