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


// Executes a RunConfig and writes <stem>.csv, <stem>.json and
// <stem>.manifest.json into the output directory.

#ifndef CESARO_CLI_RUNNER_HPP_
#define CESARO_CLI_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cesaro/bounds.hpp"
#include "cesaro/cli/config.hpp"
#include "cesaro/experiment_result.hpp"

namespace cesaro::cli {

/// Process exit codes; stable across releases.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitRuntime = 3,
  /// A verification flag was raised (bound or supermartingale violation,
  /// decomposition identity failure). Outputs are still written.
  kExitFlagged = 4,
};

/// Default output directory when neither --out-dir nor output.dir is set.
inline constexpr const char* kOutDirEnv = "CESARO_LAB_OUT_DIR";
inline constexpr const char* kFallbackOutDir = "cesaro-out";

struct RunOverrides {
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path csv;
  std::filesystem::path json;
  std::filesystem::path manifest;
  std::size_t rows = 0;
  std::vector<std::string> flags;
  /// One-line human summary (success) or error message (failure).
  std::string message;
};

/// Precedence: override, config, $CESARO_LAB_OUT_DIR, kFallbackOutDir.
std::filesystem::path resolve_out_dir(const RunConfig& config,
                                      const RunOverrides& overrides);

/// Config with the seed and worker overrides applied.
RunConfig apply_overrides(RunConfig config, const RunOverrides& overrides);

/// Pure computation; throws on invalid input or worker failure.
mc::ExperimentResult execute(const RunConfig& config);

/// The analytic tail bound over an (n, y) grid.
mc::ExperimentResult bound_table(const bounds::TailBoundParams& params,
                                 const std::vector<std::uint64_t>& n_grid,
                                 const std::vector<double>& y_grid);

/// Config for the bound-table subcommand.
RunConfig bound_table_config(const bounds::TailBoundParams& params,
                             std::vector<std::uint64_t> n_grid,
                             std::vector<double> y_grid);

/// Runs and writes outputs; never throws, failures map to exit codes.
RunOutcome run(const RunConfig& config, const RunOverrides& overrides = {});

}  // namespace cesaro::cli

#endif  // CESARO_CLI_RUNNER_HPP_
