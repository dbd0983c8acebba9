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


#ifndef ITMSS_EVENTS_HPP_
#define ITMSS_EVENTS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace itmss {

enum class EventKind { kLimit, kTension, kEstop, kContamination, kBatteryLow, kClamp };

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct Event {
  double time{};
  EventKind kind{EventKind::kLimit};
  std::string detail;

  bool operator==(const Event&) const = default;
};

/// Append-only record of noteworthy simulation happenings. Times are
/// nondecreasing.
class EventLog {
 public:
  void add(double time, EventKind kind, std::string detail);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  std::size_t count(EventKind kind) const;

 private:
  std::vector<Event> events_;
};

}  // namespace itmss

#endif  // ITMSS_EVENTS_HPP_
