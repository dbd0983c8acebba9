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


// Replayable command scripts: one `t=<s> <target> <verb> [args]` record per
// line, '#' starts a comment.
//
//   t=0     winch slider -6
//   t=12.5  rov thrust 0.15 0 -0.3 0
//   t=300   winch estop
//   t=301   winch reset
//   t=400   winch breaker open|close
//   t=500   pump power on|off
//   t=3600  sim stop

#ifndef ITMSS_SCRIPT_HPP_
#define ITMSS_SCRIPT_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "itmss/commands.hpp"

namespace itmss {

struct ScriptEntry {
  double time{};
  Command command;

  bool operator==(const ScriptEntry&) const = default;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Entries come back sorted by time; ties keep file order.
std::vector<ScriptEntry> parse_script(std::string_view text);
std::vector<ScriptEntry> load_script_file(const std::string& path);

std::string format_entry(const ScriptEntry& entry);

/// The shipped under-ice arc mission for the Lake Whitehall scenario.
std::string default_arc_script();

}  // namespace itmss

#endif  // ITMSS_SCRIPT_HPP_
