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


#include "itmss/protocol.hpp"

#include <gtest/gtest.h>

#include "fuzz_messages.hpp"

namespace itmss {
namespace {

std::string error_text(const std::string& line) {
  const auto r = decode_telemetry(line);
  if (const auto* e = std::get_if<DecodeError>(&r)) return e->message;
  return "";
}

std::string command_error(const std::string& line) {
  const auto r = decode_command(line);
  if (const auto* e = std::get_if<DecodeError>(&r)) return e->message;
  return "";
}

TEST(Protocol, TelemetryFuzzRoundTrip) {
  fuzz::MessageGen gen(21);
  for (int i = 0; i < 5000; ++i) {
    const TelemetryMessage m = gen.telemetry();
    const std::string line = encode(m);
    ASSERT_EQ(line.back(), '\n');
    ASSERT_EQ(line.find('\n'), line.size() - 1) << line;
    const auto back = decode_telemetry(line);
    ASSERT_TRUE(std::holds_alternative<TelemetryMessage>(back)) << line;
    ASSERT_EQ(std::get<TelemetryMessage>(back), m) << line;
    ASSERT_EQ(encode(std::get<TelemetryMessage>(back)), line);
  }
}

TEST(Protocol, CommandFuzzRoundTrip) {
  fuzz::MessageGen gen(22);
  for (int i = 0; i < 5000; ++i) {
    const CommandMessage c = gen.command();
    const std::string line = encode(c);
    const auto back = decode_command(line);
    ASSERT_TRUE(std::holds_alternative<CommandMessage>(back)) << line;
    ASSERT_EQ(std::get<CommandMessage>(back), c) << line;
  }
}

TEST(Protocol, FieldOrderIsStable) {
  const std::string line = encode(TelemetryMessage{3, 1.5, MeasurementPayload{12.5, std::nullopt, false, 36.5}});
  EXPECT_EQ(line,
            R"({"seq":3,"t":1.5,"kind":"measurement","ch4":12.5,"co2":null,"valid":false,"lag":36.5})"
            "\n");
  EXPECT_EQ(encode(TelemetryMessage{0, 0.0, HelloPayload{}}),
            R"({"seq":0,"t":0.0,"kind":"hello","v":1,"server":"itmss-twin"})"
            "\n");
  EXPECT_EQ(encode(CommandMessage{7, WinchSlider{-20}}),
            R"({"seq":7,"kind":"winch_slider","value":-20})"
            "\n");
}

TEST(Protocol, TruncatedRecordNamesMissingField) {
  EXPECT_EQ(error_text(R"({"seq":1,"t":2,"kind":"measurement","ch4":1,"co2":2,"valid":true})"),
            "missing field 'lag'");
  EXPECT_EQ(error_text(R"({"seq":1,"kind":"hello","v":1,"server":"x"})"), "missing field 't'");
  EXPECT_EQ(error_text(R"({"seq":1,"t":0,"kind":"state","rov":{"pos":[0,0,0]}})"),
            "missing field 'vel'");
  EXPECT_EQ(command_error(R"({"seq":1,"kind":"rov_thrust"})"), "missing field 'thrust'");
  EXPECT_FALSE(error_text(R"({"seq":1,"t":0,"kind":"measurement","ch4":1,)").empty());
}

TEST(Protocol, ExtraFieldsIgnored) {
  const auto r = decode_telemetry(
      R"({"seq":1,"t":2,"kind":"event","event":"clamp","detail":"x","future":{"a":[1,2]}})");
  ASSERT_TRUE(std::holds_alternative<TelemetryMessage>(r));
  EXPECT_EQ(std::get<EventPayload>(std::get<TelemetryMessage>(r).payload).event, EventKind::kClamp);
  const auto c = decode_command(R"({"seq":4,"kind":"estop","reason":"panic"})");
  ASSERT_TRUE(std::holds_alternative<CommandMessage>(c));
}

TEST(Protocol, RejectsWrongTypesAndKinds) {
  EXPECT_EQ(error_text(R"({"seq":-1,"t":0,"kind":"hello","v":1,"server":"x"})"),
            "field 'seq' must be a non-negative integer");
  EXPECT_EQ(error_text(R"({"seq":1,"t":"now","kind":"hello","v":1,"server":"x"})"),
            "field 't' must be a number");
  EXPECT_EQ(error_text(R"({"seq":1,"t":0,"kind":"hello","v":2,"server":"x"})"),
            "unsupported protocol version");
  EXPECT_EQ(error_text(R"({"seq":1,"t":0,"kind":"gossip"})"), "unknown kind 'gossip'");
  EXPECT_EQ(error_text(R"({"seq":1,"t":0,"kind":"event","event":"party","detail":""})"),
            "unknown event kind 'party'");
  EXPECT_EQ(error_text("[1,2,3]"), "record is not an object");
  EXPECT_EQ(command_error(R"({"seq":1,"kind":"winch_slider","value":2.5})"),
            "field 'value' must be an integer");
  EXPECT_EQ(command_error(R"({"seq":1,"kind":"rov_thrust","thrust":[1,2]})"),
            "field 'thrust' must be an array of 4 numbers");
  EXPECT_FALSE(command_error("not json at all").empty());
  EXPECT_FALSE(command_error("").empty());
}

TEST(Protocol, ScriptOnlyCommandsAreNotEncodable) {
  EXPECT_THROW(encode(CommandMessage{1, BreakerSet{true}}), std::invalid_argument);
  EXPECT_THROW(encode(CommandMessage{1, SimStop{}}), std::invalid_argument);
}

TEST(Protocol, MeasurementHelpers) {
  const Measurement m{12.0, 3.0, 401.0, true, 36.56};
  EXPECT_EQ(to_measurement(measurement_message(m)), m);
  const TelemetryMessage e = event_message({5.0, EventKind::kLimit, "drum full"});
  EXPECT_EQ(kind_name(e.payload), "event");
  EXPECT_EQ(e.time, 5.0);
}

}  // namespace
}  // namespace itmss
