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

#include "cesaro/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "cesaro/errors.hpp"

namespace cesaro::mc {

namespace {

using seq::SequenceSpec;

template <class Grid>
void require_increasing(const Grid& grid, const char* path) {
  if (grid.empty()) throw ConfigError(path, "grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) {
      throw ConfigError(path, "grid must be strictly increasing");
    }
  }
}

void require_positive(std::span<const double> grid, const char* path,
                      double lower = 0.0, bool inclusive = false) {
  if (grid.empty()) throw ConfigError(path, "grid must not be empty");
  for (double v : grid) {
    const bool ok = std::isfinite(v) && (inclusive ? v >= lower : v > lower);
    if (!ok) {
      throw ConfigError(path, std::string("values must be ") +
                                  (inclusive ? ">= " : "> ") +
                                  format_double(lower));
    }
  }
}

/// Streams X_1..X_n of one replication through `on(i, x)`.
template <class OnStep>
void sweep(const SequenceSpec& spec, Seed seed, std::uint64_t n, OnStep&& on) {
  seq::with_generator(spec, seed, [&](auto& gen) {
    for (std::uint64_t i = 1; i <= n; ++i) on(i, gen.next());
  });
}

struct RowContext {
  std::string experiment;
  std::string family;
  std::uint64_t replications;
  std::uint64_t seed;

  ResultRow row(std::uint64_t n, std::optional<double> threshold,
                std::string statistic, double value,
                std::optional<double> lo = std::nullopt,
                std::optional<double> hi = std::nullopt) const {
    return ResultRow{experiment, family,   n,  threshold, std::move(statistic),
                     value,      lo,       hi, replications, seed};
  }
};

RowContext context(std::string experiment, std::string_view family,
                   const MonteCarloConfig& cfg) {
  return {std::move(experiment), std::string(family), cfg.replications,
          cfg.seed.value};
}

nlohmann::json base_metadata(std::string_view operation,
                             const MonteCarloConfig& cfg) {
  return {{"operation", operation},
          {"replications", cfg.replications},
          {"confidence", cfg.confidence},
          {"seed", cfg.seed.value},
          {"stream_base", cfg.seed.stream_id}};
}

// Wilson interval over one column of a replication x cell matrix of 0/1.
TailEstimate column_estimate(const std::vector<std::vector<std::uint8_t>>& hits,
                             std::size_t column, double confidence) {
  std::uint64_t successes = 0;
  for (const auto& rep : hits) successes += rep[column];
  return wilson_estimate(successes, hits.size(), confidence);
}

}  // namespace

void validate(const MonteCarloConfig& cfg, bool reports_ci) {
  if (cfg.replications < 1) {
    throw ConfigError("replications", "must be >= 1");
  }
  if (reports_ci && cfg.replications < kMinReplicationsForCi) {
    throw ConfigError("replications",
                      "must be >= 30 for interval-reporting estimates");
  }
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    throw ConfigError("confidence", "must lie in (0, 1)");
  }
  if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) throw ConfigError("n_grid", "values must be >= 1");
    if (i > 0 && !(cfg.n_grid[i - 1] < cfg.n_grid[i])) {
      throw ConfigError("n_grid", "grid must be strictly increasing");
    }
  }
}

void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& body) {
  if (count == 0) return;
  const auto n_threads = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, count));

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::uint64_t fail_index = std::numeric_limits<std::uint64_t>::max();
  std::string fail_message;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= count) return;
      try {
        body(r);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (r < fail_index) {
          fail_index = r;
          fail_message = e.what();
        }
        failed = true;
      } catch (...) {
        std::lock_guard lock(mu);
        if (r < fail_index) {
          fail_index = r;
          fail_message = "unknown exception";
        }
        failed = true;
      }
    }
  };

  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failed) throw WorkerError(fail_index, fail_message);
}

MeanEstimate mean_estimate(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) {
    out.mean = std::nan("");
    out.se = std::nan("");
    return out;
  }
  math::CompensatedSum sum;
  for (double v : values) sum.add(v);
  out.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  math::CompensatedSum sq;
  for (double v : values) sq.add((v - out.mean) * (v - out.mean));
  const double var = sq.value() / static_cast<double>(values.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

TailEstimate estimate_tail_prob(const SequenceSpec& spec,
                                const math::ScaledRate& rate, std::uint64_t n,
                                double M, const MonteCarloConfig& cfg) {
  validate(cfg);
  if (std::find(cfg.n_grid.begin(), cfg.n_grid.end(), n) == cfg.n_grid.end()) {
    throw ConfigError("n_grid", "n = " + std::to_string(n) +
                                    " is not in the configured grid");
  }
  if (!(M > 0.0)) throw DomainError("threshold M must be > 0");

  const auto hits = run_replications<std::uint8_t>(cfg, [&](std::uint64_t r) {
    math::RunningMean mean;
    sweep(spec, replication_seed(cfg, r), n,
          [&](std::uint64_t, double x) { mean.push(x); });
    return static_cast<std::uint8_t>(mean.scaled(rate) >= M);
  });
  std::uint64_t successes = 0;
  for (auto h : hits) successes += h;
  return wilson_estimate(successes, cfg.replications, cfg.confidence);
}

ExperimentResult estimate_scaled_l1(const SequenceSpec& spec,
                                    const math::ScaledRate& rate,
                                    const MonteCarloConfig& cfg) {
  validate(cfg);
  require_increasing(cfg.n_grid, "n_grid");
  const auto& grid = cfg.n_grid;
  const std::size_t g = grid.size();

  // Per replication: |Xbar_n| then (1/n) sum |X_i| for each grid n.
  const auto per_rep =
      run_replications<std::vector<double>>(cfg, [&](std::uint64_t r) {
        std::vector<double> out(2 * g);
        math::RunningMean mean;
        math::RunningMean abs_mean;
        std::size_t next = 0;
        sweep(spec, replication_seed(cfg, r), grid.back(),
              [&](std::uint64_t i, double x) {
                mean.push(x);
                abs_mean.push(std::abs(x));
                if (i == grid[next]) {
                  out[next] = std::abs(mean.mean());
                  out[g + next] = abs_mean.mean();
                  ++next;
                }
              });
        return out;
      });

  const double z = two_sided_z(cfg.confidence);
  const auto ctx = context("l1", spec.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("estimate_scaled_l1", cfg);
  result.metadata["beta"] = rate.beta();

  std::vector<double> column(per_rep.size());
  for (std::size_t j = 0; j < g; ++j) {
    const double scale = rate.factor(static_cast<double>(grid[j]));
    for (std::size_t r = 0; r < per_rep.size(); ++r) column[r] = per_rep[r][j];
    const auto l1 = mean_estimate(column);
    for (std::size_t r = 0; r < per_rep.size(); ++r) {
      column[r] = per_rep[r][g + j];
    }
    const auto terms = mean_estimate(column);

    const double value = scale * l1.mean;
    const double se = scale * l1.se;
    result.rows.push_back(ctx.row(grid[j], std::nullopt, "scaled_l1", value,
                                  value - z * se, value + z * se));
    result.rows.push_back(
        ctx.row(grid[j], std::nullopt, "scaled_l1_se", se));
    const double tv = scale * terms.mean;
    const double tse = scale * terms.se;
    result.rows.push_back(ctx.row(grid[j], std::nullopt, "scaled_abs_mean", tv,
                                  tv - z * tse, tv + z * tse));
  }
  return result;
}

ExperimentResult path_sup_diagnostic(const SequenceSpec& spec,
                                     const math::ScaledRate& rate,
                                     std::span<const std::uint64_t> m_grid,
                                     std::uint64_t n_cap, double epsilon,
                                     const MonteCarloConfig& cfg) {
  validate(cfg);
  require_increasing(m_grid, "m_grid");
  if (m_grid.front() < 1) throw ConfigError("m_grid", "values must be >= 1");
  if (!(m_grid.back() < n_cap)) {
    throw ConfigError("n_cap", "must exceed every m in m_grid");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
  const std::size_t g = m_grid.size();

  const auto hits =
      run_replications<std::vector<std::uint8_t>>(cfg, [&](std::uint64_t r) {
        // seg_max[j] = max of k^beta |Xbar_k| over [m_j, m_{j+1}).
        std::vector<double> seg_max(g, 0.0);
        math::RunningMean mean;
        std::size_t seg = 0;
        bool started = false;
        sweep(spec, replication_seed(cfg, r), n_cap,
              [&](std::uint64_t k, double x) {
                mean.push(x);
                while (seg + 1 < g && k >= m_grid[seg + 1]) ++seg;
                if (!started) {
                  if (k < m_grid.front()) return;
                  started = true;
                }
                const double v = std::abs(mean.scaled(rate));
                seg_max[seg] = std::max(seg_max[seg], v);
              });
        std::vector<std::uint8_t> out(g);
        double suffix = 0.0;
        for (std::size_t j = g; j-- > 0;) {
          suffix = std::max(suffix, seg_max[j]);
          out[j] = suffix > epsilon;
        }
        return out;
      });

  const auto ctx = context("as_diag", spec.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("path_sup_diagnostic", cfg);
  result.metadata["beta"] = rate.beta();
  result.metadata["n_cap"] = n_cap;
  for (std::size_t j = 0; j < g; ++j) {
    const auto est = column_estimate(hits, j, cfg.confidence);
    result.rows.push_back(ctx.row(m_grid[j], epsilon, "sup_exceed_prob",
                                  est.p_hat, est.ci_low, est.ci_high));
  }
  return result;
}

ExperimentResult aui_tail_diagnostic(const SequenceSpec& spec,
                                     const math::ScaledRate& rate, double q,
                                     std::span<const double> x_grid,
                                     const MonteCarloConfig& cfg) {
  validate(cfg);
  require_increasing(cfg.n_grid, "n_grid");
  require_positive(x_grid, "x_grid");
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw DomainError("Hoelder exponent q must be >= 1");
  }
  const auto& grid = cfg.n_grid;
  const std::size_t g = grid.size();
  const std::size_t nx = x_grid.size();

  const auto hits =
      run_replications<std::vector<std::uint8_t>>(cfg, [&](std::uint64_t r) {
        std::vector<std::uint8_t> out(g * nx);
        std::size_t next = 0;
        sweep(spec, replication_seed(cfg, r), grid.back(),
              [&](std::uint64_t i, double x) {
                if (i != grid[next]) return;
                const double scaled =
                    rate.factor(static_cast<double>(i)) * std::abs(x);
                for (std::size_t t = 0; t < nx; ++t) {
                  out[next * nx + t] = scaled > x_grid[t];
                }
                ++next;
              });
        return out;
      });

  const auto ctx = context("aui", spec.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("aui_tail_diagnostic", cfg);
  result.metadata["beta"] = rate.beta();
  result.metadata["q"] = q;
  for (std::size_t j = 0; j < g; ++j) {
    const double weight =
        std::pow(static_cast<double>(grid[j]), rate.beta() * q);
    for (std::size_t t = 0; t < nx; ++t) {
      const auto est = column_estimate(hits, j * nx + t, cfg.confidence);
      result.rows.push_back(ctx.row(grid[j], x_grid[t], "exceed_prob",
                                    est.p_hat, est.ci_low, est.ci_high));
      result.rows.push_back(ctx.row(grid[j], x_grid[t], "aui_tail",
                                    weight * est.p_hat, weight * est.ci_low,
                                    weight * est.ci_high));
    }
  }
  return result;
}

ExperimentResult supermartingale_condition_check(const SequenceSpec& spec,
                                                 const math::ScaledRate& rate,
                                                 const MonteCarloConfig& cfg) {
  if (spec.family() != seq::Family::kSupermartingale) {
    throw UnsupportedFamily(
        "supermartingale_condition_check needs the supermartingale family, "
        "got " + std::string(spec.name()));
  }
  validate(cfg);
  require_increasing(cfg.n_grid, "n_grid");
  const auto& grid = cfg.n_grid;
  const std::size_t g = grid.size();

  // Per replication: |X_n| and |X_{n+1}| for each grid n.
  const auto per_rep =
      run_replications<std::vector<double>>(cfg, [&](std::uint64_t r) {
        std::vector<double> out(2 * g);
        std::size_t at = 0;
        std::size_t after = 0;
        sweep(spec, replication_seed(cfg, r), grid.back() + 1,
              [&](std::uint64_t i, double x) {
                if (after < at) {
                  out[g + after] = std::abs(x);
                  ++after;
                }
                if (at < g && i == grid[at]) {
                  out[at] = std::abs(x);
                  ++at;
                }
              });
        return out;
      });

  const double z = two_sided_z(cfg.confidence);
  const auto ctx = context("supermart", spec.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("supermartingale_condition_check", cfg);
  result.metadata["beta"] = rate.beta();

  std::vector<double> ratios;
  std::vector<double> now(per_rep.size());
  std::vector<double> later(per_rep.size());
  for (std::size_t j = 0; j < g; ++j) {
    const double n = static_cast<double>(grid[j]);
    const double weight = std::pow(1.0 + 1.0 / n, rate.beta());
    ratios.clear();
    for (std::size_t r = 0; r < per_rep.size(); ++r) {
      now[r] = per_rep[r][j];
      later[r] = per_rep[r][g + j];
      if (now[r] > 0.0) ratios.push_back(weight * later[r] / now[r]);
    }
    const auto ratio = mean_estimate(ratios);
    result.rows.push_back(ctx.row(grid[j], std::nullopt, "supermart_ratio",
                                  ratio.mean, ratio.mean - z * ratio.se,
                                  ratio.mean + z * ratio.se));
    result.rows.push_back(
        ctx.row(grid[j], std::nullopt, "supermart_ratio_se", ratio.se));
    const double marginal =
        weight * mean_estimate(later).mean / mean_estimate(now).mean;
    result.rows.push_back(
        ctx.row(grid[j], std::nullopt, "marginal_ratio", marginal));
    if (ratio.count > 0 && ratio.mean > 1.0 + kSeTolerance * ratio.se) {
      result.flags.push_back("supermartingale condition violated at n=" +
                             std::to_string(grid[j]) + ": ratio " +
                             format_double(ratio.mean) + " > 1 + 3 SE");
    }
  }
  return result;
}

ExperimentResult bound_vs_empirical(const bounds::TailBoundParams& params,
                                    const SequenceSpec& spec,
                                    std::span<const double> y_grid,
                                    const MonteCarloConfig& cfg) {
  const auto* tail = spec.get_if<seq::ExpTailSpec>();
  if (tail == nullptr || !(tail->params == params)) {
    throw UnsupportedFamily(
        "bound_vs_empirical needs the exp_tail family built from the same "
        "parameters");
  }
  validate(cfg);
  require_increasing(cfg.n_grid, "n_grid");
  require_positive(y_grid, "y_grid", 1.0, true);
  const auto vp = bounds::validate_params(params);
  const auto& grid = cfg.n_grid;
  const std::size_t g = grid.size();
  const std::size_t ny = y_grid.size();

  std::vector<bounds::CesaroTailBound> analytic(g * ny);
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t t = 0; t < ny; ++t) {
      analytic[j * ny + t] = bounds::cesaro_tail_bound(vp, grid[j], y_grid[t]);
    }
  }

  const auto hits =
      run_replications<std::vector<std::uint8_t>>(cfg, [&](std::uint64_t r) {
        std::vector<std::uint8_t> out(g * ny);
        math::RunningMean mean;
        std::size_t next = 0;
        sweep(spec, replication_seed(cfg, r), grid.back(),
              [&](std::uint64_t i, double x) {
                mean.push(x);
                if (i != grid[next]) return;
                const double m = mean.mean();
                for (std::size_t t = 0; t < ny; ++t) {
                  out[next * ny + t] = m >= analytic[next * ny + t].threshold;
                }
                ++next;
              });
        return out;
      });

  const auto ctx = context("expbound", spec.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("bound_vs_empirical", cfg);
  const auto d = bounds::derive_constants(vp);
  result.metadata["alpha_exp"] = d.alpha_exp;
  result.metadata["c3"] = d.c3;
  result.metadata["c4"] = d.c4;
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t t = 0; t < ny; ++t) {
      const auto& a = analytic[j * ny + t];
      const auto est = column_estimate(hits, j * ny + t, cfg.confidence);
      const bool flagged = a.prob_bound < 1.0 && est.ci_low > a.prob_bound;
      result.rows.push_back(ctx.row(grid[j], y_grid[t], "empirical_exceed",
                                    est.p_hat, est.ci_low, est.ci_high));
      result.rows.push_back(
          ctx.row(grid[j], y_grid[t], "analytic_bound", a.prob_bound));
      result.rows.push_back(
          ctx.row(grid[j], y_grid[t], "tail_threshold", a.threshold));
      result.rows.push_back(
          ctx.row(grid[j], y_grid[t], "bound_flag", flagged ? 1.0 : 0.0));
      if (flagged) {
        result.flags.push_back(
            "analytic bound violated at n=" + std::to_string(grid[j]) +
            ", y=" + format_double(y_grid[t]) + ": Wilson lower " +
            format_double(est.ci_low) + " > bound " +
            format_double(a.prob_bound));
      }
    }
  }
  return result;
}

ExperimentResult counterexample_sweep(const seq::CounterexampleSpec& spec,
                                      double M, std::span<const int> k_grid,
                                      const MonteCarloConfig& cfg) {
  seq::validate(spec);
  validate(cfg);
  require_increasing(k_grid, "k_grid");
  if (k_grid.front() < 1 || k_grid.back() > 62) {
    throw ConfigError("k_grid", "values must lie in [1, 62]");
  }
  if (!(M > 0.0)) throw ConfigError("M", "must be > 0");
  const std::size_t g = k_grid.size();
  const seq::SequenceSpec family(spec);
  const std::uint64_t n_max = (std::uint64_t{1} << k_grid.back()) - 1;

  std::vector<double> scale(g);
  for (std::size_t j = 0; j < g; ++j) {
    scale[j] = std::pow(std::ldexp(1.0, k_grid[j]), spec.beta);
  }

  // Per replication: full-mean event, then block-mean event, per k.
  const auto hits =
      run_replications<std::vector<std::uint8_t>>(cfg, [&](std::uint64_t r) {
        std::vector<std::uint8_t> out(2 * g);
        math::RunningMean mean;
        double block_sum = 0.0;
        std::size_t next = 0;
        std::uint64_t target = (std::uint64_t{1} << k_grid[0]) - 1;
        sweep(family, replication_seed(cfg, r), n_max,
              [&](std::uint64_t i, double x) {
                mean.push(x);
                if (std::has_single_bit(i)) block_sum = 0.0;
                block_sum += x;
                if (i != target) return;
                const double two_k = static_cast<double>(i + 1);
                out[next] = scale[next] * mean.mean() >= M;
                out[g + next] = scale[next] * (block_sum / two_k) >= M;
                if (++next < g) {
                  target = (std::uint64_t{1} << k_grid[next]) - 1;
                }
              });
        return out;
      });

  const auto ctx = context("counterexample", family.name(), cfg);
  ExperimentResult result;
  result.metadata = base_metadata("counterexample_sweep", cfg);
  result.metadata["alpha"] = spec.alpha;
  result.metadata["beta"] = spec.beta;
  result.metadata["bound_b"] = spec.bound_b;
  for (std::size_t j = 0; j < g; ++j) {
    const std::uint64_t n = (std::uint64_t{1} << k_grid[j]) - 1;
    const auto full = column_estimate(hits, j, cfg.confidence);
    const auto block = column_estimate(hits, g + j, cfg.confidence);
    result.rows.push_back(ctx.row(n, M, "tail_prob", full.p_hat, full.ci_low,
                                  full.ci_high));
    result.rows.push_back(ctx.row(n, M, "block_tail_prob", block.p_hat,
                                  block.ci_low, block.ci_high));
    if (k_grid[j] >= 2) {
      result.rows.push_back(ctx.row(
          n, M, "be_margin",
          bounds::berry_esseen_margin(n + 1, spec.alpha, spec.beta, M)));
    }
  }
  return result;
}

}  // namespace cesaro::mc
