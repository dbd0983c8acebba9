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


#include "itmss/script.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace itmss {
namespace {

double to_number(const std::string& token, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ScriptError(line, "expected a number, got '" + token + "'");
  }
  return v;
}

std::string number_text(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Command parse_command(const std::vector<std::string>& tok, int line) {
  auto need = [&](std::size_t n) {
    if (tok.size() != n) {
      throw ScriptError(line, "'" + tok[0] + " " + tok[1] + "' takes " +
                                  std::to_string(n - 2) + " argument(s)");
    }
  };
  const std::string& target = tok[0];
  const std::string& verb = tok[1];
  if (target == "winch") {
    if (verb == "slider") {
      need(3);
      const double v = to_number(tok[2], line);
      if (v != std::floor(v)) throw ScriptError(line, "slider takes an integer");
      return WinchSlider{static_cast<int>(v)};
    }
    if (verb == "estop") {
      need(2);
      return EStop{};
    }
    if (verb == "reset") {
      need(2);
      return EStopReset{};
    }
    if (verb == "breaker") {
      need(3);
      if (tok[2] == "open") return BreakerSet{true};
      if (tok[2] == "close") return BreakerSet{false};
      throw ScriptError(line, "breaker takes open|close");
    }
  } else if (target == "rov") {
    if (verb == "thrust") {
      need(6);
      RovThrust t;
      for (std::size_t i = 0; i < 4; ++i) t.axes[i] = to_number(tok[2 + i], line);
      return t;
    }
  } else if (target == "pump") {
    if (verb == "power") {
      need(3);
      if (tok[2] == "on") return PumpPower{true};
      if (tok[2] == "off") return PumpPower{false};
      throw ScriptError(line, "pump power takes on|off");
    }
  } else if (target == "sim") {
    if (verb == "stop") {
      need(2);
      return SimStop{};
    }
  } else {
    throw ScriptError(line, "unknown target '" + target + "'");
  }
  throw ScriptError(line, "unknown verb '" + verb + "' for " + target);
}

}  // namespace

std::vector<ScriptEntry> parse_script(std::string_view text) {
  std::vector<ScriptEntry> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok[0].rfind("t=", 0) != 0) throw ScriptError(line, "record must start with t=<seconds>");
    const double t = to_number(tok[0].substr(2), line);
    if (t < 0) throw ScriptError(line, "negative time");
    tok.erase(tok.begin());
    if (tok.size() < 2) throw ScriptError(line, "expected '<target> <verb> [args]'");
    out.push_back({t, parse_command(tok, line)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  return out;
}

std::vector<ScriptEntry> load_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScriptError(0, "cannot open script '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

std::string format_entry(const ScriptEntry& entry) {
  std::string out = "t=" + number_text(entry.time) + " ";
  std::visit(
      [&out](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, WinchSlider>) {
          out += "winch slider " + std::to_string(cmd.value);
        } else if constexpr (std::is_same_v<T, RovThrust>) {
          out += "rov thrust";
          for (double a : cmd.axes) out += " " + number_text(a);
        } else if constexpr (std::is_same_v<T, EStop>) {
          out += "winch estop";
        } else if constexpr (std::is_same_v<T, EStopReset>) {
          out += "winch reset";
        } else if constexpr (std::is_same_v<T, PumpPower>) {
          out += cmd.on ? "pump power on" : "pump power off";
        } else if constexpr (std::is_same_v<T, BreakerSet>) {
          out += cmd.open ? "winch breaker open" : "winch breaker close";
        } else {
          out += "sim stop";
        }
      },
      entry.command);
  return out;
}

std::string default_arc_script() {
  return R"(# Lake Whitehall under-ice arc: out from the shore hole, two passes along
# an arc under the thicker ice, then back to the hole.
t=0 rov thrust 0.15 0 -0.3 0
t=0 winch slider -8
t=540 winch slider 0
t=540 rov thrust 0 0 -0.3 1
t=543.14 rov thrust 0.15 0 -0.3 0.0035
t=1270 rov thrust 0 0 -0.3 1
t=1276.28 rov thrust 0.15 0 -0.3 -0.0035
t=1860 rov thrust 0 0 -0.3 -1
t=1863.14 rov thrust 0.15 0 -0.3 0
t=1863.14 winch slider 6
t=2440 winch slider 0
t=2440 rov thrust 0 0 -0.3 0
)";
}

}  // namespace itmss
