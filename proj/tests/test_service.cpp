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


#include "itmss/service.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "itmss/recording.hpp"
#include "itmss/winch.hpp"
#include "test_client.hpp"

namespace itmss {
namespace {

using testing::LineClient;
using testing::WsClient;

ScenarioConfig short_mission(double duration) {
  ScenarioConfig cfg = default_scenario();
  cfg.duration = duration;
  cfg.sediment.intervals.clear();
  return cfg;
}

TelemetryMessage decoded(const std::string& line) {
  auto r = decode_telemetry(line);
  if (auto* e = std::get_if<DecodeError>(&r)) {
    ADD_FAILURE() << "undecodable: " << line << " (" << e->message << ")";
    return {};
  }
  return std::get<TelemetryMessage>(r);
}

std::vector<std::string> read_all(LineClient& c, int timeout_ms = 20000) {
  std::vector<std::string> lines;
  while (auto line = c.read_line(timeout_ms)) lines.push_back(*line);
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          (name + "_" + std::to_string(::getpid()))).string();
}

TEST(Outbox, NumbersRecordsPerSubscriber) {
  Outbox box;
  ASSERT_TRUE(box.push({99, 0.0, HelloPayload{}}));
  ASSERT_TRUE(box.push({99, 1.0, EventPayload{EventKind::kLimit, "x"}}));
  EXPECT_EQ(decoded(*box.pop()).seq, 0u);
  EXPECT_EQ(decoded(*box.pop()).seq, 1u);
  EXPECT_EQ(box.next_seq(), 2u);
}

TEST(Outbox, OverflowClosesInsteadOfBlocking) {
  Outbox box(2);
  EXPECT_TRUE(box.push({0, 0.0, HelloPayload{}}));
  EXPECT_TRUE(box.push({0, 0.0, HelloPayload{}}));
  EXPECT_FALSE(box.push({0, 0.0, HelloPayload{}}));
  EXPECT_TRUE(box.closed());
  EXPECT_TRUE(box.overflowed());
  EXPECT_FALSE(box.pop().has_value());
}

TEST(Outbox, CloseDrainsQueuedLines) {
  Outbox box;
  box.push_raw("a\n");
  box.close();
  EXPECT_FALSE(box.push_raw("b\n"));
  EXPECT_EQ(box.pop(), "a\n");
  EXPECT_FALSE(box.pop().has_value());
}

TEST(Hub, GreetsWithHelloThenConfigSummary) {
  const ScenarioConfig cfg = default_scenario();
  TelemetryHub hub([&] { return config_summary(cfg); });
  auto box = std::make_shared<Outbox>();
  hub.attach(box);
  hub.publish({0, 0.5, EventPayload{EventKind::kLimit, "l"}});
  hub.close_all();
  const auto hello = decoded(*box->pop());
  const auto summary = decoded(*box->pop());
  const auto event = decoded(*box->pop());
  EXPECT_EQ(hello.seq, 0u);
  EXPECT_TRUE(std::holds_alternative<HelloPayload>(hello.payload));
  EXPECT_EQ(std::get<HelloPayload>(hello.payload).version, 1);
  EXPECT_EQ(summary.seq, 1u);
  ASSERT_TRUE(std::holds_alternative<ConfigSummaryPayload>(summary.payload));
  EXPECT_EQ(std::get<ConfigSummaryPayload>(summary.payload).slider_max, cfg.controller.slider_max);
  EXPECT_EQ(event.seq, 2u);
  EXPECT_FALSE(box->pop().has_value());
}

TEST(Hub, DropsClosedSubscribers) {
  TelemetryHub hub;
  auto a = std::make_shared<Outbox>();
  auto b = std::make_shared<Outbox>();
  hub.attach(a, false);
  hub.attach(b, false);
  b->close();
  hub.publish({0, 1.0, HelloPayload{}});
  EXPECT_EQ(hub.subscriber_count(), 1u);
}

TEST(BindAddress, Parses) {
  EXPECT_EQ(parse_bind_address("127.0.0.1:7700").port, 7700);
  EXPECT_EQ(parse_bind_address("localhost:0").host, "127.0.0.1");
  EXPECT_EQ(parse_bind_address("0.0.0.0:80").host, "0.0.0.0");
  EXPECT_THROW(parse_bind_address("127.0.0.1"), std::invalid_argument);
  EXPECT_THROW(parse_bind_address("127.0.0.1:70000"), std::invalid_argument);
  EXPECT_THROW(parse_bind_address("127.0.0.1:x"), std::invalid_argument);
  EXPECT_THROW(parse_bind_address("example.org:80"), std::invalid_argument);
  EXPECT_THROW(parse_bind_address(":80"), std::invalid_argument);
}

TEST(LiveMission, HeadlessRunsToCompletion) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 0.0;
  LiveMission m(short_mission(10.0), opt);
  m.start();
  m.wait();
  EXPECT_TRUE(m.finished());
  EXPECT_NEAR(m.snapshot().time, 10.0, 1e-9);
}

TEST(LiveMission, BindFailureThrows) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 0.0;
  opt.speed = 1.0;
  LiveMission holder(short_mission(600.0), opt);
  holder.start();
  ServeOptions clash = opt;
  clash.bind = "127.0.0.1:" + std::to_string(holder.port());
  LiveMission second(short_mission(1.0), clash);
  EXPECT_THROW(second.start(), std::runtime_error);
  holder.stop();
  holder.wait();

  ServeOptions bad = opt;
  bad.bind = "nowhere";
  LiveMission third(short_mission(1.0), bad);
  EXPECT_ANY_THROW(third.start());
}

TEST(LiveMission, ClientsSeeTheSameGapFreeStream) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 20.0;
  LiveMission m(short_mission(20.0), opt);
  m.start();
  LineClient a(m.port());
  LineClient b(m.port());
  auto la = read_all(a);
  auto lb = read_all(b);
  m.wait();

  ASSERT_GT(la.size(), 50u);
  ASSERT_GT(lb.size(), 50u);
  std::vector<TelemetryMessage> ma, mb;
  for (const auto& l : la) ma.push_back(decoded(l));
  for (const auto& l : lb) mb.push_back(decoded(l));
  for (const auto* ms : {&ma, &mb}) {
    for (std::size_t i = 0; i < ms->size(); ++i) ASSERT_EQ((*ms)[i].seq, i);
    EXPECT_TRUE(std::holds_alternative<HelloPayload>((*ms)[0].payload));
    EXPECT_TRUE(std::holds_alternative<ConfigSummaryPayload>((*ms)[1].payload));
    EXPECT_NEAR(ms->back().time, 20.0, 1e-9);
  }

  // Past the greeting, the later subscriber's stream is a suffix of the
  // earlier one's.
  auto strip = [](TelemetryMessage msg) { msg.seq = 0; return msg; };
  const auto& longer = ma.size() >= mb.size() ? ma : mb;
  const auto& shorter = ma.size() >= mb.size() ? mb : ma;
  const std::size_t offset = longer.size() - shorter.size();
  for (std::size_t i = 2; i < shorter.size(); ++i) {
    ASSERT_EQ(strip(shorter[i]), strip(longer[i + offset])) << "record " << i;
  }
}

TEST(LiveMission, CommandsAreAcked) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 2.0;
  LiveMission m(short_mission(60.0), opt);
  m.start();
  LineClient c(m.port());
  c.send(encode(CommandMessage{4, WinchSlider{10}}));
  c.send(encode(CommandMessage{5, WinchSlider{500}}));
  c.send("{\"seq\":6,\"kind\":\"warp\"}\n");
  c.send("not json\n");

  std::vector<AckPayload> acks;
  while (acks.size() < 4) {
    auto line = c.read_line(5000);
    ASSERT_TRUE(line.has_value());
    const auto msg = decoded(*line);
    if (auto* ack = std::get_if<AckPayload>(&msg.payload)) acks.push_back(*ack);
  }
  m.stop();
  m.wait();
  EXPECT_EQ(acks[0].cmd_seq, 4u);
  EXPECT_TRUE(acks[0].ok);
  EXPECT_FALSE(acks[0].clamped);
  EXPECT_EQ(acks[1].cmd_seq, 5u);
  EXPECT_TRUE(acks[1].ok);
  EXPECT_TRUE(acks[1].clamped);
  EXPECT_FALSE(acks[2].ok);
  EXPECT_NE(acks[2].error.find("offset"), std::string::npos) << acks[2].error;
  EXPECT_FALSE(acks[3].ok);
}

TEST(LiveMission, EStopFromClientStopsTheDrum) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 5.0;
  opt.state_decimation = 1;
  const ScenarioConfig cfg = short_mission(60.0);
  const int bound = estop_tick_bound(cfg.controller);
  LiveMission m(cfg, opt);
  m.start();
  LineClient c(m.port());
  c.send(encode(CommandMessage{1, WinchSlider{-cfg.controller.slider_max}}));

  // Wait for the winch to come up to speed.
  double duty = 0.0;
  while (duty < 0.5 * cfg.controller.max_duty) {
    auto line = c.read_line(5000);
    ASSERT_TRUE(line.has_value());
    const auto msg = decoded(*line);
    if (auto* st = std::get_if<StatePayload>(&msg.payload)) duty = std::abs(st->duty);
  }
  c.send(encode(CommandMessage{2, EStop{}}));

  std::optional<double> ack_time;
  std::optional<double> zero_time;
  while (!zero_time) {
    auto line = c.read_line(5000);
    ASSERT_TRUE(line.has_value());
    const auto msg = decoded(*line);
    if (auto* ack = std::get_if<AckPayload>(&msg.payload); ack && ack->cmd_seq == 2) {
      ack_time = msg.time;
    }
    if (auto* st = std::get_if<StatePayload>(&msg.payload); st && ack_time && st->estopped &&
                                                              st->duty == 0.0) {
      zero_time = msg.time;
    }
  }
  m.stop();
  m.wait();
  EXPECT_LE(*zero_time - *ack_time, (bound + 1) * cfg.dt + 1e-9);
  EXPECT_TRUE(m.snapshot().winch.estopped);
  EXPECT_EQ(m.snapshot().winch.current_duty, 0.0);
}

TEST(LiveMission, WebSocketClients) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 2.0;
  LiveMission m(short_mission(60.0), opt);
  m.start();
  WsClient ws(m.port());
  const std::string head = ws.handshake("dGhlIHNhbXBsZSBub25jZQ==");
  EXPECT_NE(head.find("101"), std::string::npos) << head;
  EXPECT_NE(head.find("Sec-WebSocket-Accept: s3pPLMBiTxaQ9kYGzzhZRbK+xOo="), std::string::npos)
      << head;

  auto first = ws.read_frame();
  ASSERT_TRUE(first.has_value());
  EXPECT_TRUE(std::holds_alternative<HelloPayload>(decoded(*first).payload));

  std::string cmd = encode(CommandMessage{7, WinchSlider{-5}});
  cmd.pop_back();
  ws.send_text(cmd);
  bool acked = false;
  for (int i = 0; i < 2000 && !acked; ++i) {
    auto frame = ws.read_frame();
    ASSERT_TRUE(frame.has_value());
    const auto msg = decoded(*frame);
    if (auto* ack = std::get_if<AckPayload>(&msg.payload)) {
      EXPECT_EQ(ack->cmd_seq, 7u);
      EXPECT_TRUE(ack->ok);
      acked = true;
    }
  }
  EXPECT_TRUE(acked);
  m.stop();
  m.wait();
}

TEST(LiveMission, WebSocketWithoutKeyIsRejected) {
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 1.0;
  LiveMission m(short_mission(60.0), opt);
  m.start();
  LineClient c(m.port());
  c.send("GET / HTTP/1.1\r\nHost: x\r\nUpgrade: websocket\r\n\r\n");
  auto reply = c.read_some(5000);
  ASSERT_TRUE(reply.has_value());
  EXPECT_EQ(reply->rfind("HTTP/1.1 400", 0), 0u) << *reply;
  m.stop();
  m.wait();
}

TEST(Recording, ReplayIsByteIdenticalAndPaced) {
  const std::string path = temp_path("itmss_rec");
  ServeOptions opt;
  opt.bind = "127.0.0.1:0";
  opt.speed = 0.0;
  opt.record_path = path;
  {
    LiveMission m(short_mission(3.0), opt);
    m.start();
    m.wait();
  }
  const std::string recorded = slurp(path);
  ASSERT_FALSE(recorded.empty());

  for (const double speed : {0.0, 1.0, 10.0}) {
    std::string out;
    const auto t0 = std::chrono::steady_clock::now();
    const ReplayStats stats = replay_file(path, speed, [&](const std::string& l) { out += l; });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(out, recorded) << "speed " << speed;
    EXPECT_EQ(stats.undecodable, 0u);
    EXPECT_NEAR(stats.sim_span, 3.0, 1e-9);
    if (speed > 0.0) {
      EXPECT_GE(wall, 0.95 * stats.sim_span / speed) << "speed " << speed;
      EXPECT_LE(wall, 1.25 * stats.sim_span / speed + 0.05) << "speed " << speed;
    }
  }
  std::filesystem::remove(path);
}

TEST(Recording, ForwardsUndecodableLinesVerbatim) {
  std::istringstream in("{\"seq\":0,\"t\":0.0,\"kind\":\"hello\",\"v\":1,\"server\":\"s\"}\ngarbage\nlast");
  std::string out;
  const auto stats = replay(in, 0.0, [&](const std::string& l) { out += l; });
  EXPECT_EQ(out, in.str());
  EXPECT_EQ(stats.records, 3u);
  EXPECT_EQ(stats.undecodable, 2u);
}

TEST(Recording, OpenFailureThrows) {
  EXPECT_THROW(open_recording("/nonexistent-dir/x/rec.ndjson"), std::runtime_error);
}

}  // namespace
}  // namespace itmss
