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


// itmss_twin: headless entry points of the digital twin.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "itmss/config.hpp"
#include "itmss/csv.hpp"
#include "itmss/recording.hpp"
#include "itmss/script.hpp"
#include "itmss/service.hpp"
#include "itmss/sim.hpp"
#include "itmss/sizing.hpp"

namespace fs = std::filesystem;
using namespace itmss;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeFault = 3;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

// Thrown for bad user input that is not a config file problem as such
// (missing files, bad flag values); reported with the config exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioConfig load_scenario(const std::string& path, std::optional<std::uint64_t> seed,
                             std::optional<double> duration) {
  ScenarioConfig cfg = path.empty() ? default_scenario() : load_config_file(path);
  if (seed) cfg.seed = *seed;
  if (duration) {
    // Shortened missions keep the part of each sediment window that still fits.
    cfg.duration = *duration;
    auto& windows = cfg.sediment.intervals;
    std::erase_if(windows, [&](const auto& w) { return w.start >= cfg.duration; });
    for (auto& w : windows) w.end = std::min(w.end, cfg.duration);
  }
  if (auto problems = validate(cfg); !problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

std::vector<ScriptEntry> load_script(const std::string& path) {
  if (path.empty()) return parse_script(default_arc_script());
  if (path == "none") return {};
  return load_script_file(path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void install_signal_handlers() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

// --- subcommands -----------------------------------------------------------

struct CommonOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
};

int cmd_size(const CommonOpts& o) {
  const ScenarioConfig cfg = load_scenario(o.config, o.seed, o.duration);
  std::cout << format_sizing(compute_sizing(cfg));
  return kOk;
}

int cmd_run(const CommonOpts& o, const std::string& script_path, const std::string& out_dir) {
  const ScenarioConfig cfg = load_scenario(o.config, o.seed, o.duration);
  const auto script = load_script(script_path);
  const auto started = std::chrono::steady_clock::now();
  const RunResult result = run(cfg, script);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  fs::create_directories(out_dir);
  {
    auto out = open_output(fs::path(out_dir) / "measurements.csv");
    write_measurements_csv(out, result.measurements);
  }
  {
    auto out = open_output(fs::path(out_dir) / "track.csv");
    write_track_csv(out, result.track);
  }
  {
    auto out = open_output(fs::path(out_dir) / "events.csv");
    write_events_csv(out, result.events);
  }
  {
    auto out = open_output(fs::path(out_dir) / "flow.csv");
    write_flow_csv(out, result.flow_history);
  }
  std::size_t valid = 0;
  for (const auto& m : result.measurements) valid += m.valid ? 1 : 0;
  std::cerr << "mission end t=" << result.end_time << " s, " << result.measurements.size()
            << " measurements (" << valid << " valid), " << result.events.size()
            << " events, wall " << wall << " s\n";
  return kOk;
}

int cmd_serve(const CommonOpts& o, ServeOptions opts, const std::string& script_path) {
  const ScenarioConfig cfg = load_scenario(o.config, o.seed, o.duration);
  try {
    parse_bind_address(opts.bind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opts.script = load_script(script_path);
  LiveMission mission(cfg, opts);
  mission.start();
  std::cerr << "serving on port " << mission.port() << "\n";
  install_signal_handlers();
  while (!mission.finished() && !g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  mission.stop();
  mission.wait();
  return kOk;
}

int cmd_lagfix(const CommonOpts& o, const std::string& measurements_path,
               const std::string& track_path, const std::string& flow_path,
               std::optional<double> flow_rate, double mission_start, const std::string& out_path) {
  const ScenarioConfig cfg = load_scenario(o.config, o.seed, o.duration);
  auto min = open_input(measurements_path);
  const auto series = read_measurements_csv(min);
  auto tin = open_input(track_path);
  const auto track = read_track_csv(tin);
  FlowHistory flow;
  if (!flow_path.empty()) {
    auto fin = open_input(flow_path);
    flow = read_flow_csv(fin);
  } else {
    flow = {{0.0, flow_rate ? *flow_rate : configured_flow(cfg)}};
  }
  const auto geo = lag_correct(series, track, flow, cfg.pump, mission_start);
  if (out_path.empty() || out_path == "-") {
    write_geo_csv(std::cout, geo);
  } else {
    auto out = open_output(out_path);
    write_geo_csv(out, geo);
  }
  return kOk;
}

int cmd_replay(const std::string& path, double speed, const std::string& bind, int wait_clients) {
  if (!fs::exists(path)) throw UsageError("no such recording '" + path + "'");
  if (bind.empty()) {
    replay_file(path, speed, [](const std::string& line) { std::cout << line << std::flush; });
    return kOk;
  }
  BindAddress address;
  try {
    address = parse_bind_address(bind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  // The recording already starts with hello and config_summary.
  TelemetryHub hub;
  TcpServer server(
      hub,
      // Commands are ignored: a recording cannot be steered.
      [](const std::string&, Outbox&) {},
      0);
  server.start(address);
  std::cerr << "replaying on port " << server.port() << "\n";
  install_signal_handlers();
  while (static_cast<int>(server.connection_count()) < wait_clients && !g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  // Attachment happens on the connection thread after a short protocol probe.
  while (static_cast<int>(hub.subscriber_count()) < wait_clients && !g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  replay_file(path, speed, [&](const std::string& line) { hub.publish_raw(line); });
  hub.close_all();
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ITMSS digital twin: sizing, headless missions, live telemetry"};
  app.require_subcommand(1);

  CommonOpts common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "scenario file (default: built-in Whitehall)");
    sub->add_option("--seed", common.seed, "override the scenario seed");
    sub->add_option("--duration", common.duration, "override mission duration, s");
  };

  auto* size = app.add_subcommand("size", "print the sizing report");
  add_common(size);

  std::string script_path;
  std::string out_dir = "out";
  auto* runc = app.add_subcommand("run", "run a scripted mission headless and write CSVs");
  add_common(runc);
  runc->add_option("--script", script_path, "command script (default: built-in arc; 'none' for no commands)");
  runc->add_option("--out", out_dir, "output directory");

  ServeOptions serve_opts;
  bool unpaced = false;
  auto* serve = app.add_subcommand("serve", "run a live mission with the telemetry service");
  add_common(serve);
  serve->add_option("--bind", serve_opts.bind, "host:port (port 0 picks a free one)");
  serve->add_option("--speed", serve_opts.speed, "sim seconds per wall second")->check(CLI::PositiveNumber);
  serve->add_flag("--unpaced", unpaced, "step as fast as possible");
  serve->add_option("--state-every", serve_opts.state_decimation, "steps between state records")
      ->check(CLI::PositiveNumber);
  serve->add_option("--client-buffer", serve_opts.client_buffer, "records queued per client before it is dropped");
  serve->add_option("--record", serve_opts.record_path, "write the stream to this file");
  serve->add_option("--script", script_path, "command script (default: none)");

  std::string measurements_path, track_path, flow_path, geo_out;
  std::optional<double> flow_rate;
  double mission_start = 0.0;
  auto* lagfix = app.add_subcommand("lagfix", "map measurements back to intake time and position");
  add_common(lagfix);
  lagfix->add_option("--measurements", measurements_path)->required();
  lagfix->add_option("--track", track_path)->required();
  auto* flow_opt = lagfix->add_option("--flow", flow_path, "flow history CSV");
  lagfix->add_option("--flow-rate", flow_rate, "constant flow, m^3/s")->excludes(flow_opt);
  lagfix->add_option("--mission-start", mission_start, "drop samples taken in before this time");
  lagfix->add_option("--out", geo_out, "output CSV (default stdout)");

  std::string recording;
  double replay_speed = 1.0;
  std::string replay_bind;
  int wait_clients = 0;
  auto* replay = app.add_subcommand("replay", "re-emit a recording with its original timing");
  replay->add_option("--recording", recording)->required();
  replay->add_option("--speed", replay_speed, "timing multiplier; 0 = as fast as possible")
      ->check(CLI::NonNegativeNumber);
  replay->add_option("--bind", replay_bind, "serve to TCP clients instead of stdout");
  replay->add_option("--wait-clients", wait_clients, "clients to wait for before starting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*size) return cmd_size(common);
    if (*runc) return cmd_run(common, script_path, out_dir);
    if (*serve) {
      if (unpaced) serve_opts.speed = 0.0;
      return cmd_serve(common, serve_opts, script_path.empty() ? "none" : script_path);
    }
    if (*lagfix) {
      return cmd_lagfix(common, measurements_path, track_path, flow_path, flow_rate, mission_start,
                        geo_out);
    }
    if (*replay) return cmd_replay(recording, replay_speed, replay_bind, wait_clients);
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return kConfigError;
  } catch (const ScriptError& e) {
    std::cerr << "script error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CsvError& e) {
    std::cerr << "csv error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return kRuntimeFault;
  }
  return kOk;
}
