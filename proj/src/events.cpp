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


#include <algorithm>
#include <array>

#include "itmss/commands.hpp"
#include "itmss/events.hpp"

namespace itmss {
namespace {

constexpr std::array<std::string_view, 6> kEventNames = {
    "limit", "tension", "estop", "contamination", "battery_low", "clamp"};

}  // namespace

std::string_view to_string(EventKind kind) {
  return kEventNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

void EventLog::add(double time, EventKind kind, std::string detail) {
  if (!events_.empty()) time = std::max(time, events_.back().time);
  events_.push_back({time, kind, std::move(detail)});
}

std::size_t EventLog::count(EventKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      events_.begin(), events_.end(),
      [kind](const Event& e) { return e.kind == kind; }));
}

void CommandQueue::push(Command cmd) {
  std::lock_guard lock(mutex_);
  pending_.push_back(std::move(cmd));
}

std::vector<Command> CommandQueue::drain() {
  std::deque<Command> taken;
  {
    std::lock_guard lock(mutex_);
    taken.swap(pending_);
  }
  std::vector<Command> out(std::make_move_iterator(taken.begin()),
                           std::make_move_iterator(taken.end()));
  std::stable_partition(out.begin(), out.end(), is_estop);
  return out;
}

bool CommandQueue::empty() const {
  std::lock_guard lock(mutex_);
  return pending_.empty();
}

}  // namespace itmss
