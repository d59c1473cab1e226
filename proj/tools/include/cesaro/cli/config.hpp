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


// Declarative run configuration: strict JSON with a versioned schema.
//
//   {
//     "schema_version": 1,
//     "experiment": "counterexample",
//     "seed": 1,
//     "mc": {"replications": 400, "confidence": 0.95, "workers": 1},
//     "family": {"kind": "counterexample", "alpha": 0.4, "beta": 0.6},
//     "params": {"M": 1, "k_grid": [8, 9, 10]},
//     "output": {"dir": "", "stem": "counterexample"}
//   }
//
// Unknown fields are errors; omitted optional fields take their defaults.
// Every error names the offending field as a JSON path ("$.family.delta").

#ifndef CESARO_CLI_CONFIG_HPP_
#define CESARO_CLI_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cesaro/bounds.hpp"
#include "cesaro/online_estimators.hpp"
#include "cesaro/sequence_models.hpp"

namespace cesaro::cli {

inline constexpr int kSchemaVersion = 1;

enum class Experiment {
  kCounterexample,
  kL1,
  kAsDiag,
  kAui,
  kSupermart,
  kExpbound,
  kBayesRisk,
  kMarMean,
  kBoundTable,
};

std::string_view experiment_name(Experiment e);
/// Throws ConfigError("$.experiment", ...) for unknown names.
Experiment parse_experiment(std::string_view name);

/// Whether the experiment draws random numbers (everything but bound_table).
bool is_stochastic(Experiment e);

struct McSection {
  std::uint64_t replications = 1000;
  double confidence = 0.95;
  unsigned workers = 1;

  bool operator==(const McSection&) const = default;
};

struct OutputSection {
  /// Empty: use the command-line or environment default.
  std::string dir;
  /// Empty: the experiment name.
  std::string stem;

  bool operator==(const OutputSection&) const = default;
};

// --- data-generating processes of the online experiments

struct BayesDgpSpec {
  int dim = 1;
  double amplitude = 0.4;
  int points_per_axis = 0;

  bool operator==(const BayesDgpSpec&) const = default;
};

struct MarDgpSpec {
  int dim = 1;
  int points_per_axis = 0;

  bool operator==(const MarDgpSpec&) const = default;
};

/// Bare tail-bound parameters for the analytic bound_table; unlike the
/// exp_tail family any valid gamma and c1 are allowed.
struct TailParamsSpec {
  bounds::TailBoundParams params;

  bool operator==(const TailParamsSpec&) const = default;
};

using FamilySection =
    std::variant<seq::SequenceSpec, BayesDgpSpec, MarDgpSpec, TailParamsSpec>;

// --- experiment parameters

struct CounterexampleParams {
  double M = 1.0;
  std::vector<int> k_grid;

  bool operator==(const CounterexampleParams&) const = default;
};

struct L1Params {
  double beta = 0.5;
  std::vector<std::uint64_t> n_grid;

  bool operator==(const L1Params&) const = default;
};

struct AsDiagParams {
  double beta = 0.5;
  std::vector<std::uint64_t> m_grid;
  std::uint64_t n_cap = 0;
  double epsilon = 0.5;

  bool operator==(const AsDiagParams&) const = default;
};

struct AuiParams {
  double beta = 0.5;
  double q = 1.0;
  std::vector<std::uint64_t> n_grid;
  std::vector<double> x_grid;

  bool operator==(const AuiParams&) const = default;
};

struct SupermartParams {
  double beta = 0.5;
  std::vector<std::uint64_t> n_grid;

  bool operator==(const SupermartParams&) const = default;
};

/// expbound and bound_table.
struct TailGridParams {
  std::vector<std::uint64_t> n_grid;
  std::vector<double> y_grid;

  bool operator==(const TailGridParams&) const = default;
};

struct BayesRiskParams {
  std::uint64_t n = 1024;
  online::EstimatorSchedule schedule;

  bool operator==(const BayesRiskParams&) const = default;
};

struct MarMeanParams {
  std::uint64_t n = 1024;
  online::NuisanceSchedule schedule;

  bool operator==(const MarMeanParams&) const = default;
};

using ExperimentParams =
    std::variant<CounterexampleParams, L1Params, AsDiagParams, AuiParams,
                 SupermartParams, TailGridParams, BayesRiskParams,
                 MarMeanParams>;

struct RunConfig {
  int schema_version = kSchemaVersion;
  Experiment experiment = Experiment::kBoundTable;
  std::uint64_t seed = 0;
  McSection mc;
  FamilySection family = seq::SequenceSpec(seq::CounterexampleSpec{});
  ExperimentParams params;
  OutputSection output;

  bool operator==(const RunConfig&) const = default;

  std::string stem() const;
};

/// Throws ConfigError with a field path on malformed JSON, unknown or
/// missing fields, type mismatches and constraint violations.
RunConfig parse_config(std::string_view text);
RunConfig parse_config(const nlohmann::json& doc);

/// Canonical form: every field written, keys in schema order.
nlohmann::ordered_json to_json(const RunConfig& config);
std::string serialize_config(const RunConfig& config);

/// Re-runs the cross-field checks; parse_config calls this.
void validate(const RunConfig& config);

/// Reads and parses a file; I/O failures are ConfigErrors on the path.
RunConfig load_config(const std::string& path);

}  // namespace cesaro::cli

#endif  // CESARO_CLI_CONFIG_HPP_
