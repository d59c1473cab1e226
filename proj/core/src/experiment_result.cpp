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

#include "cesaro/experiment_result.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "cesaro/errors.hpp"

namespace cesaro::mc {

namespace {

void check_cell_text(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    throw DomainError("CSV text cell contains a delimiter: " + s);
  }
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string{};
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("malformed number in CSV: " + std::string(s));
  }
  return x;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("malformed integer in CSV: " + std::string(s));
  }
  return x;
}

std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

nlohmann::json optional_json(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

const ResultRow* ExperimentResult::find(std::string_view statistic,
                                        std::uint64_t n,
                                        std::optional<double> threshold) const {
  for (const auto& row : rows) {
    if (row.statistic == statistic && row.n == n &&
        row.threshold == threshold) {
      return &row;
    }
  }
  return nullptr;
}

std::vector<const ResultRow*> ExperimentResult::select(
    std::string_view statistic) const {
  std::vector<const ResultRow*> out;
  for (const auto& row : rows) {
    if (row.statistic == statistic) out.push_back(&row);
  }
  return out;
}

void ExperimentResult::append(const ExperimentResult& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  flags.insert(flags.end(), other.flags.begin(), other.flags.end());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  return std::string(buf.data(), ptr);
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << '\n';
  for (const auto& r : result.rows) {
    check_cell_text(r.experiment);
    check_cell_text(r.family);
    check_cell_text(r.statistic);
    out << r.experiment << ',' << r.family << ',' << r.n << ','
        << format_optional(r.threshold) << ',' << r.statistic << ','
        << format_double(r.value) << ',' << format_optional(r.ci_low) << ','
        << format_optional(r.ci_high) << ',' << r.replications << ','
        << r.seed << '\n';
  }
  return out.str();
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  bool header = true;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != kCsvColumns.size()) {
      throw DomainError("CSV row has " + std::to_string(cells.size()) +
                        " cells, expected " +
                        std::to_string(kCsvColumns.size()));
    }
    if (header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] != kCsvColumns[i]) {
          throw DomainError("unexpected CSV column " + std::string(cells[i]));
        }
      }
      header = false;
      continue;
    }
    ResultRow r;
    r.experiment = std::string(cells[0]);
    r.family = std::string(cells[1]);
    r.n = parse_u64(cells[2]);
    r.threshold = parse_optional(cells[3]);
    r.statistic = std::string(cells[4]);
    r.value = parse_double(cells[5]);
    r.ci_low = parse_optional(cells[6]);
    r.ci_high = parse_optional(cells[7]);
    r.replications = parse_u64(cells[8]);
    r.seed = parse_u64(cells[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"family", r.family},
                    {"n", r.n},
                    {"threshold", optional_json(r.threshold)},
                    {"statistic", r.statistic},
                    {"value", r.value},
                    {"ci_low", optional_json(r.ci_low)},
                    {"ci_high", optional_json(r.ci_high)},
                    {"replications", r.replications},
                    {"seed", r.seed}});
  }
  return {{"metadata", result.metadata},
          {"flags", result.flags},
          {"rows", std::move(rows)}};
}

ExperimentResult result_from_json(const nlohmann::json& doc) {
  ExperimentResult result;
  result.metadata = doc.at("metadata");
  result.flags = doc.at("flags").get<std::vector<std::string>>();
  for (const auto& j : doc.at("rows")) {
    ResultRow r;
    r.experiment = j.at("experiment").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.n = j.at("n").get<std::uint64_t>();
    r.threshold = optional_from_json(j.at("threshold"));
    r.statistic = j.at("statistic").get<std::string>();
    r.value = j.at("value").is_null() ? std::nan("") : j.at("value").get<double>();
    r.ci_low = optional_from_json(j.at("ci_low"));
    r.ci_high = optional_from_json(j.at("ci_high"));
    r.replications = j.at("replications").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    result.rows.push_back(std::move(r));
  }
  return result;
}

}  // namespace cesaro::mc
