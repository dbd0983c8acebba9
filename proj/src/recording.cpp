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


#include "itmss/recording.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace itmss {

std::unique_ptr<std::ostream> open_recording(const std::string& path) {
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*out) throw std::runtime_error("cannot open recording '" + path + "' for writing");
  return out;
}

void record(Outbox& stream, std::ostream& out) {
  while (auto line = stream.pop()) {
    out << *line;
  }
  out.flush();
}

ReplayStats replay(std::istream& in, double speed, const LineSink& sink) {
  using clock = std::chrono::steady_clock;
  ReplayStats stats;
  const auto wall_start = clock::now();
  bool have_first = false;
  double first = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    const bool had_newline = !in.eof();
    auto decoded = decode_telemetry(line);
    if (const auto* msg = std::get_if<TelemetryMessage>(&decoded)) {
      if (!have_first) {
        first = msg->time;
        have_first = true;
      }
      stats.sim_span = std::max(stats.sim_span, msg->time - first);
      if (speed > 0.0) {
        const double offset = (msg->time - first) / speed;
        std::this_thread::sleep_until(
            wall_start + std::chrono::duration_cast<clock::duration>(
                             std::chrono::duration<double>(offset)));
      }
    } else {
      ++stats.undecodable;
    }
    if (had_newline) line.push_back('\n');
    sink(line);
    ++stats.records;
  }
  return stats;
}

ReplayStats replay_file(const std::string& path, double speed, const LineSink& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open recording '" + path + "'");
  return replay(in, speed, sink);
}

}  // namespace itmss
