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

// Tabular experiment output shared by the Monte Carlo engine, the online
// estimators and the CLI. Column order of the CSV form is fixed:
//   experiment,family,n,threshold,statistic,value,ci_low,ci_high,
//   replications,seed
// Absent optional cells are written empty in CSV and null in JSON.

#ifndef CESARO_EXPERIMENT_RESULT_HPP_
#define CESARO_EXPERIMENT_RESULT_HPP_

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cesaro::mc {

inline constexpr std::array<std::string_view, 10> kCsvColumns = {
    "experiment", "family",  "n",       "threshold",    "statistic",
    "value",      "ci_low",  "ci_high", "replications", "seed"};

struct ResultRow {
  std::string experiment;
  std::string family;
  std::uint64_t n = 0;
  std::optional<double> threshold;
  std::string statistic;
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::json metadata = nlohmann::json::object();
  /// Human-readable descriptions of failed checks (bound violations,
  /// supermartingale-condition violations). Empty when all checks pass.
  std::vector<std::string> flags;

  /// First row with this statistic at (n, threshold); nullptr if none.
  /// Thresholds compare exactly, which is safe because they are copied from
  /// the configuration grids.
  const ResultRow* find(std::string_view statistic, std::uint64_t n,
                        std::optional<double> threshold = std::nullopt) const;

  std::vector<const ResultRow*> select(std::string_view statistic) const;

  void append(const ExperimentResult& other);
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

std::string to_csv(const ExperimentResult& result);
std::vector<ResultRow> parse_csv(std::string_view text);

nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);

}  // namespace cesaro::mc

#endif  // CESARO_EXPERIMENT_RESULT_HPP_
