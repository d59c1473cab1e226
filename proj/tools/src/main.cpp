// Copyright 2026 The cesaro-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// cesaro-lab: batch front door for the experiments.
//
//   cesaro-lab run <config.json> [--workers N] [--out-dir PATH] [--seed U64]
//   cesaro-lab validate <config.json>
//   cesaro-lab bound-table c0 c1 c2 beta gamma delta --n-grid ... --y-grid ...
//
// stdout carries a one-line summary; data goes to files. Exit codes are
// listed in cesaro/cli/runner.hpp.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cesaro/cli/config.hpp"
#include "cesaro/cli/runner.hpp"
#include "cesaro/errors.hpp"

namespace {

using namespace cesaro;
using namespace cesaro::cli;

int report(const RunOutcome& outcome) {
  if (outcome.exit_code == kExitOk || outcome.exit_code == kExitFlagged) {
    std::cout << outcome.message << "\n";
    for (const auto& f : outcome.flags) std::cerr << "flag: " << f << "\n";
  } else {
    std::cerr << "error: " << outcome.message << "\n";
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cesaro-means stochastic convergence lab"};
  app.set_version_flag("--version", std::string(CESARO_LAB_VERSION));
  app.require_subcommand(1);

  RunOverrides overrides;
  std::string out_dir;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Worker threads")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--out-dir", out_dir,
                    std::string("Output directory (default: config, then $") +
                        kOutDirEnv + ")");
  };

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  add_overrides(run_cmd);
  run_cmd->add_option("--seed", seed, "Seed (overrides the config)");

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", config_path, "Config file")->required();

  std::vector<double> tail_params;
  std::vector<std::uint64_t> n_grid{64, 256, 1024};
  std::vector<double> y_grid{1, 2, 4};
  auto* table_cmd = app.add_subcommand(
      "bound-table", "Tabulate the analytic Cesaro tail bound");
  table_cmd->add_option("params", tail_params, "c0 c1 c2 beta gamma delta")
      ->required()
      ->expected(6);
  table_cmd->add_option("--n-grid", n_grid, "Sample sizes")->delimiter(',');
  table_cmd->add_option("--y-grid", y_grid, "Deviation levels")->delimiter(',');
  add_overrides(table_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!out_dir.empty()) overrides.out_dir = out_dir;
  if (workers != 0) overrides.workers = workers;
  if (run_cmd->count("--seed") > 0) overrides.seed = seed;

  try {
    if (*validate_cmd) {
      const auto config = load_config(config_path);
      std::cout << "valid " << experiment_name(config.experiment) << " config: "
                << config_path << "\n";
      return kExitOk;
    }
    if (*run_cmd) return report(run(load_config(config_path), overrides));

    const bounds::TailBoundParams p{tail_params[0], tail_params[1],
                                    tail_params[2], tail_params[3],
                                    tail_params[4], tail_params[5]};
    return report(run(bound_table_config(p, n_grid, y_grid), overrides));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
