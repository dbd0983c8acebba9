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


// Mission recordings: the concatenated encoded lines of a telemetry stream,
// and a paced replay of such a file.

#ifndef ITMSS_RECORDING_HPP_
#define ITMSS_RECORDING_HPP_

#include <cstddef>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <string>

#include "itmss/service.hpp"

namespace itmss {

/// Opens `path` for writing (truncating). Throws std::runtime_error.
std::unique_ptr<std::ostream> open_recording(const std::string& path);

/// Writes every line popped from `stream` until it is closed and drained.
void record(Outbox& stream, std::ostream& out);

using LineSink = std::function<void(const std::string& line)>;

struct ReplayStats {
  std::size_t records{};
  std::size_t undecodable{};  // forwarded verbatim, no timing information
  double sim_span{};          // last time - first time
};

/// Re-emits each line with the original inter-record timing divided by
/// `speed`. speed <= 0 emits as fast as possible. Lines are passed on
/// byte-for-byte, newline included.
ReplayStats replay(std::istream& in, double speed, const LineSink& sink);
ReplayStats replay_file(const std::string& path, double speed, const LineSink& sink);

}  // namespace itmss

#endif  // ITMSS_RECORDING_HPP_
