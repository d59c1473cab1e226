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


#include "cesaro/cli/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "cesaro/cli/digest.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/mc_engine.hpp"
#include "cesaro/online_estimators.hpp"

namespace cesaro::cli {

namespace fs = std::filesystem;

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

mc::MonteCarloConfig engine_config(const RunConfig& c) {
  mc::MonteCarloConfig cfg;
  cfg.replications = c.mc.replications;
  cfg.confidence = c.mc.confidence;
  cfg.workers = c.mc.workers;
  cfg.seed = Seed{c.seed, 0};
  return cfg;
}

const seq::SequenceSpec& sequence(const RunConfig& c) {
  return std::get<seq::SequenceSpec>(c.family);
}

}  // namespace

fs::path resolve_out_dir(const RunConfig& config,
                         const RunOverrides& overrides) {
  if (overrides.out_dir && !overrides.out_dir->empty()) {
    return *overrides.out_dir;
  }
  if (!config.output.dir.empty()) return config.output.dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return kFallbackOutDir;
}

RunConfig apply_overrides(RunConfig config, const RunOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.workers) config.mc.workers = *overrides.workers;
  if (overrides.out_dir) config.output.dir = *overrides.out_dir;
  validate(config);
  return config;
}

mc::ExperimentResult bound_table(const bounds::TailBoundParams& params,
                                 const std::vector<std::uint64_t>& n_grid,
                                 const std::vector<double>& y_grid) {
  const auto vp = bounds::validate_params(params);
  const auto d = bounds::derive_constants(vp);
  mc::ExperimentResult result;
  result.metadata = {{"operation", "bound_table"},
                     {"alpha_exp", d.alpha_exp},
                     {"kappa", d.kappa},
                     {"q", d.q},
                     {"c3", d.c3},
                     {"c1_prime", d.c1_prime},
                     {"c4", d.c4},
                     {"monotone_from", bounds::monotone_from(vp)}};
  for (auto n : n_grid) {
    for (double y : y_grid) {
      const auto b = bounds::cesaro_tail_bound(vp, n, y);
      for (auto [stat, value] : {std::pair{"tail_threshold", b.threshold},
                                 std::pair{"prob_bound", b.prob_bound}}) {
        result.rows.push_back(mc::ResultRow{"bound_table", "tail_params", n, y,
                                            stat, value, std::nullopt,
                                            std::nullopt, 0, 0});
      }
    }
  }
  return result;
}

RunConfig bound_table_config(const bounds::TailBoundParams& params,
                             std::vector<std::uint64_t> n_grid,
                             std::vector<double> y_grid) {
  RunConfig c;
  c.experiment = Experiment::kBoundTable;
  try {
    bounds::validate_params(params);
  } catch (const ParamError& e) {
    throw ConfigError("$.family." + e.field(), e.what());
  }
  c.family = TailParamsSpec{params};
  c.params = TailGridParams{std::move(n_grid), std::move(y_grid)};
  validate(c);
  return c;
}

mc::ExperimentResult execute(const RunConfig& c) {
  auto cfg = engine_config(c);
  mc::ExperimentResult result;
  std::visit(
      Overloaded{
          [&](const CounterexampleParams& p) {
            result = mc::counterexample_sweep(
                *sequence(c).get_if<seq::CounterexampleSpec>(), p.M, p.k_grid,
                cfg);
          },
          [&](const L1Params& p) {
            cfg.n_grid = p.n_grid;
            result = mc::estimate_scaled_l1(sequence(c),
                                            math::ScaledRate(p.beta), cfg);
          },
          [&](const AsDiagParams& p) {
            result = mc::path_sup_diagnostic(sequence(c),
                                             math::ScaledRate(p.beta),
                                             p.m_grid, p.n_cap, p.epsilon, cfg);
          },
          [&](const AuiParams& p) {
            cfg.n_grid = p.n_grid;
            result = mc::aui_tail_diagnostic(
                sequence(c), math::ScaledRate(p.beta), p.q, p.x_grid, cfg);
          },
          [&](const SupermartParams& p) {
            cfg.n_grid = p.n_grid;
            result = mc::supermartingale_condition_check(
                sequence(c), math::ScaledRate(p.beta), cfg);
          },
          [&](const TailGridParams& p) {
            if (c.experiment == Experiment::kBoundTable) {
              result = bound_table(std::get<TailParamsSpec>(c.family).params,
                                   p.n_grid, p.y_grid);
              return;
            }
            const auto& params =
                sequence(c).get_if<seq::ExpTailSpec>()->params;
            cfg.n_grid = p.n_grid;
            result = mc::bound_vs_empirical(params, sequence(c), p.y_grid, cfg);
          },
          [&](const BayesRiskParams& p) {
            const auto& d = std::get<BayesDgpSpec>(c.family);
            const online::BayesRiskPlan plan(
                online::BayesRiskDGP::sine(d.dim, d.amplitude,
                                           d.points_per_axis),
                p.schedule);
            result = online::bayes_risk_experiment(plan, p.n, cfg);
          },
          [&](const MarMeanParams& p) {
            const auto& d = std::get<MarDgpSpec>(c.family);
            const online::MarPlan plan(
                online::MarDGP::trig(d.dim, d.points_per_axis), p.schedule,
                p.n);
            result = online::mar_mean_experiment(plan, p.n, cfg);
          },
      },
      c.params);
  result.metadata["experiment"] = experiment_name(c.experiment);
  result.metadata["version"] = CESARO_LAB_VERSION;
  return result;
}

RunOutcome run(const RunConfig& input, const RunOverrides& overrides) {
  RunOutcome out;
  const std::string started = utc_timestamp();
  RunConfig config;
  try {
    config = apply_overrides(input, overrides);
  } catch (const std::exception& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  }

  mc::ExperimentResult result;
  try {
    result = execute(config);
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    out.exit_code = kExitRuntime;
    out.message = e.what();
    return out;
  }

  const fs::path dir = resolve_out_dir(config, overrides);
  const std::string stem = config.stem();
  out.csv = dir / (stem + ".csv");
  out.json = dir / (stem + ".json");
  out.manifest = dir / (stem + ".manifest.json");
  out.rows = result.rows.size();
  out.flags = result.flags;
  out.exit_code = result.flags.empty() ? kExitOk : kExitFlagged;

  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw std::runtime_error("cannot create output directory " +
                               dir.string() + ": " + ec.message());
    }
    write_file(out.csv, mc::to_csv(result));
    write_file(out.json, mc::to_json(result).dump(2) + "\n");

    const std::string canonical = serialize_config(config);
    nlohmann::ordered_json manifest;
    manifest["artifact"] = "cesaro-lab";
    manifest["version"] = CESARO_LAB_VERSION;
    manifest["experiment"] = experiment_name(config.experiment);
    manifest["config_sha256"] = sha256_hex(canonical);
    manifest["seed"] = config.seed;
    manifest["workers"] = config.mc.workers;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_timestamp();
    manifest["exit_status"] = out.exit_code;
    manifest["flags"] = result.flags;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& p : {out.csv, out.json}) {
      files.push_back({{"name", p.filename().string()},
                       {"sha256", sha256_file(p)},
                       {"bytes", fs::file_size(p)}});
    }
    manifest["files"] = std::move(files);
    manifest["config"] = to_json(config);
    write_file(out.manifest, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    out.exit_code = kExitRuntime;
    out.message = e.what();
    return out;
  }

  std::ostringstream msg;
  msg << (out.flags.empty() ? "ok " : "flagged ")
      << experiment_name(config.experiment) << ": " << out.rows
      << " rows -> " << out.csv.string() << " (" << out.flags.size()
      << (out.flags.size() == 1 ? " flag)" : " flags)");
  out.message = msg.str();
  return out;
}

}  // namespace cesaro::cli
