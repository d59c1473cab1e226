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


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "cesaro/cli/config.hpp"
#include "cesaro/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cesaro;
using namespace cesaro::cli;
using nlohmann::json;

std::vector<fs::path> shipped_configs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(CESARO_CONFIG_DIR)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

json base_doc() {
  return json::parse(R"({
    "schema_version": 1,
    "experiment": "l1",
    "seed": 5,
    "mc": {"replications": 100, "confidence": 0.95, "workers": 2},
    "family": {"kind": "exp_tail", "c0": 1, "c1": 1, "c2": 1,
               "beta": 0.5, "gamma": 1, "delta": 0.75},
    "params": {"beta": 0.25, "n_grid": [4, 16]}
  })");
}

// Path of the ConfigError raised by parsing `doc`, or "" if none.
std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

TEST(Config, ShippedConfigsRoundTrip) {
  const auto files = shipped_configs();
  ASSERT_GE(files.size(), 20u);
  for (const auto& f : files) {
    SCOPED_TRACE(f.string());
    const RunConfig c = load_config(f.string());
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(std::string_view(text));
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_config(back), text);
  }
}

TEST(Config, EveryExperimentHasASample) {
  std::set<Experiment> seen;
  for (const auto& f : shipped_configs()) seen.insert(load_config(f.string()).experiment);
  EXPECT_EQ(seen.size(), 9u);
}

TEST(Config, DefaultsAndStem) {
  auto doc = base_doc();
  doc.erase("mc");
  const auto c = parse_config(doc);
  EXPECT_EQ(c.mc.replications, 1000u);
  EXPECT_EQ(c.mc.workers, 1u);
  EXPECT_EQ(c.stem(), "l1");
  EXPECT_EQ(c.experiment, Experiment::kL1);
  EXPECT_EQ(std::get<L1Params>(c.params).n_grid,
            (std::vector<std::uint64_t>{4, 16}));
}

TEST(Config, DeltaMustExceedBeta) {
  auto doc = base_doc();
  doc["family"]["delta"] = 0.5;
  EXPECT_EQ(error_path(doc), "$.family.delta");
}

TEST(Config, UnknownFieldRejected) {
  auto doc = base_doc();
  doc["mc"]["threads"] = 4;
  EXPECT_EQ(error_path(doc), "$.mc.threads");
  doc = base_doc();
  doc["extra"] = true;
  EXPECT_EQ(error_path(doc), "$.extra");
}

TEST(Config, MissingField) {
  auto doc = base_doc();
  doc["params"].erase("n_grid");
  EXPECT_EQ(error_path(doc), "$.params.n_grid");
  doc = base_doc();
  doc.erase("seed");
  EXPECT_EQ(error_path(doc), "$.seed");
}

TEST(Config, WrongTypes) {
  auto doc = base_doc();
  doc["seed"] = -1;
  EXPECT_EQ(error_path(doc), "$.seed");
  doc = base_doc();
  doc["params"]["n_grid"] = json::array({4, "x"});
  EXPECT_EQ(error_path(doc), "$.params.n_grid[1]");
}

TEST(Config, MalformedJson) {
  try {
    parse_config(std::string_view("{\"schema_version\": 1,"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "$");
    EXPECT_NE(e.detail().find("malformed JSON"), std::string::npos);
  }
}

TEST(Config, FamilyMustSuitExperiment) {
  auto doc = base_doc();
  doc["experiment"] = "supermart";
  EXPECT_EQ(error_path(doc), "$.family.kind");
  doc = base_doc();
  doc["family"] = {{"kind", "sine"}, {"dim", 1}};
  EXPECT_EQ(error_path(doc), "$.family.kind");
  doc = base_doc();
  doc["family"]["kind"] = "nope";
  EXPECT_EQ(error_path(doc), "$.family.kind");
}

TEST(Config, ReplicationFloorForIntervals) {
  auto doc = base_doc();
  doc["mc"]["replications"] = 29;
  EXPECT_EQ(error_path(doc), "$.mc.replications");
}

TEST(Config, GridsMustIncrease) {
  auto doc = base_doc();
  doc["params"]["n_grid"] = json::array({16, 4});
  EXPECT_EQ(error_path(doc), "$.params.n_grid");
}

TEST(Config, UnknownExperimentAndSchema) {
  auto doc = base_doc();
  doc["experiment"] = "foo";
  EXPECT_EQ(error_path(doc), "$.experiment");
  doc = base_doc();
  doc["schema_version"] = 2;
  EXPECT_EQ(error_path(doc), "$.schema_version");
  EXPECT_THROW(parse_experiment("bogus"), ConfigError);
  EXPECT_EQ(parse_experiment("mar_mean"), Experiment::kMarMean);
  EXPECT_EQ(experiment_name(Experiment::kBoundTable), "bound_table");
}

TEST(Config, LoadErrorsCarryFilePath) {
  try {
    load_config("/nonexistent/x.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/x.json"), std::string::npos);
  }
}

}  // namespace
