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

// Reproducible parallel Monte Carlo estimation over the sequence families.
//
// Replication r draws from stream (cfg.seed.value, cfg.seed.stream_id + r);
// per-replication results are reduced in replication order, so output is
// bitwise identical for any worker count. Paths are consumed as streams and
// only their running statistics are kept.

#ifndef CESARO_MC_ENGINE_HPP_
#define CESARO_MC_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cesaro/bounds.hpp"
#include "cesaro/core_math.hpp"
#include "cesaro/experiment_result.hpp"
#include "cesaro/philox.hpp"
#include "cesaro/sequence_models.hpp"
#include "cesaro/wilson.hpp"

namespace cesaro::mc {

inline constexpr std::uint64_t kMinReplicationsForCi = 30;

/// Default multiple of the standard error used by stochastic comparisons.
inline constexpr double kSeTolerance = 3.0;

struct MonteCarloConfig {
  std::uint64_t replications = 1000;
  Seed seed{};
  std::vector<std::uint64_t> n_grid;
  /// Threshold, y or x grid depending on the operation.
  std::vector<double> thresholds;
  double confidence = 0.95;
  unsigned workers = 1;
};

/// Throws ConfigError when the config cannot be used. CI-reporting
/// operations need at least kMinReplicationsForCi replications.
void validate(const MonteCarloConfig& cfg, bool reports_ci = true);

inline Seed replication_seed(const MonteCarloConfig& cfg, std::uint64_t r) {
  return Seed{cfg.seed.value, cfg.seed.stream_id + r};
}

/// Runs body(r) for r in [0, count) on `workers` threads. The first failing
/// replication (lowest index) is rethrown as WorkerError.
void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& body);

/// Collects fn(r) for every replication in replication order.
template <class T, class Fn>
std::vector<T> run_replications(const MonteCarloConfig& cfg, Fn&& fn) {
  std::vector<T> out(cfg.replications);
  parallel_for(cfg.replications, cfg.workers,
               [&](std::uint64_t r) { out[r] = fn(r); });
  return out;
}

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t count = 0;
};

/// Sample mean and standard error sqrt(s^2 / count), accumulated in order.
MeanEstimate mean_estimate(std::span<const double> values);

/// pr(n^beta Xbar_n >= M) with a Wilson interval.
TailEstimate estimate_tail_prob(const seq::SequenceSpec& spec,
                                const math::ScaledRate& rate, std::uint64_t n,
                                double M, const MonteCarloConfig& cfg);

/// n^beta E|Xbar_n| for each n in cfg.n_grid. Statistics: scaled_l1 (with
/// a normal CI), scaled_l1_se and scaled_abs_mean, the replication mean of
/// n^beta (1/n) sum |X_i| that bounds scaled_l1 by the triangle inequality.
ExperimentResult estimate_scaled_l1(const seq::SequenceSpec& spec,
                                    const math::ScaledRate& rate,
                                    const MonteCarloConfig& cfg);

/// pr(max_{m <= k <= n_cap} k^beta |Xbar_k| > epsilon) for each m. Rows use
/// n = m and threshold = epsilon; statistic sup_exceed_prob.
ExperimentResult path_sup_diagnostic(const seq::SequenceSpec& spec,
                                     const math::ScaledRate& rate,
                                     std::span<const std::uint64_t> m_grid,
                                     std::uint64_t n_cap, double epsilon,
                                     const MonteCarloConfig& cfg);

/// n^{beta q} pr(n^beta |X_n| > x) over cfg.n_grid x x_grid (statistic
/// aui_tail) together with the raw exceedance (statistic exceed_prob).
ExperimentResult aui_tail_diagnostic(const seq::SequenceSpec& spec,
                                     const math::ScaledRate& rate, double q,
                                     std::span<const double> x_grid,
                                     const MonteCarloConfig& cfg);

/// For the supermartingale family: mean over paths of
/// (1+1/n)^beta |X_{n+1}| / |X_n| (statistic supermart_ratio, with
/// supermart_ratio_se) and the ratio of sample means (marginal_ratio).
/// A ratio above 1 + 3 SE raises a flag.
ExperimentResult supermartingale_condition_check(const seq::SequenceSpec& spec,
                                                 const math::ScaledRate& rate,
                                                 const MonteCarloConfig& cfg);

/// Empirical exceedance of the Cesaro tail threshold against the analytic
/// bound for each (n, y). A cell is flagged when the bound is below 1 and
/// the Wilson lower limit of the empirical probability exceeds it.
ExperimentResult bound_vs_empirical(const bounds::TailBoundParams& params,
                                    const seq::SequenceSpec& spec,
                                    std::span<const double> y_grid,
                                    const MonteCarloConfig& cfg);

/// For each k: pr((2^k)^beta Xbar_{2^k-1} >= M) (tail_prob), the block
/// version with divisor 2^k over indices [2^{k-1}, 2^k - 1]
/// (block_tail_prob), and the Berry-Esseen margin (be_margin, k >= 2).
/// Rows use n = 2^k - 1 and threshold = M.
ExperimentResult counterexample_sweep(const seq::CounterexampleSpec& spec,
                                      double M,
                                      std::span<const int> k_grid,
                                      const MonteCarloConfig& cfg);

}  // namespace cesaro::mc

#endif  // CESARO_MC_ENGINE_HPP_
