// Copyright 2026 The aquo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// aquo <scenario> --config <json> --seed <n> --out <dir> [--set key=value ...]
// aquo --check <dir>

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "aquo/experiments.hpp"
#include "aquo/trajectory.hpp"

namespace {

constexpr int kInterruptedExit = 130;

extern "C" void on_sigint(int) { aquo::request_cancel(); }

int report(const aquo::Error& e) {
  std::cerr << aquo::error_json(e).dump() << '\n';
  return aquo::exit_code_for(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive quantum operation simulator"};
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::string check_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  bool print_defaults = false;

  app.add_option("scenario", scenario, "synth | stabilize | sweep | zeno | coherence | sicpovm | diamond");
  app.add_option("--config", config_path, "JSON object of scenario parameters");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", sets, "parameter override key=value")->allow_extra_args(false);
  app.add_option("--check", check_dir, "re-verify the manifest of a completed run directory");
  app.add_flag("--defaults", print_defaults, "print the scenario's parameters and defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report(aquo::Error(aquo::ErrorKind::ConfigError, e.what()));
  }

  try {
    if (!check_dir.empty()) {
      const auto problems = aquo::verify_run_dir(check_dir);
      aquo::Json j{{"dir", check_dir}, {"ok", problems.empty()}, {"problems", problems}};
      std::cout << j.dump(2) << '\n';
      return problems.empty() ? 0 : 2;
    }
    aquo::require(!scenario.empty(), aquo::ErrorKind::ConfigError, "a scenario is required");
    const aquo::Scenario s = aquo::parse_scenario(scenario);
    if (print_defaults) {
      std::cout << aquo::default_params(s).dump(2) << '\n';
      return 0;
    }
    aquo::require(!out_dir.empty(), aquo::ErrorKind::ConfigError, "--out is required");
    const aquo::Json file_cfg = config_path.empty() ? aquo::Json() : aquo::read_json_file(config_path);
    const aquo::RunConfig cfg = aquo::build_run_config(s, file_cfg, sets, seed, out_dir);

    std::signal(SIGINT, on_sigint);
    const aquo::RunOutcome res = aquo::run_scenario(cfg);
    std::cout << res.summary.dump(2) << '\n';
    return res.interrupted ? kInterruptedExit : 0;
  } catch (const aquo::Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    return report(aquo::Error(aquo::ErrorKind::IoError, e.what()));
  }
}
