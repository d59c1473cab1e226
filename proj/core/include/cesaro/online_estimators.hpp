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


// Online estimators on synthetic data-generating processes with known truth.
//
// Both estimators are averages of terms evaluated with the estimator fitted
// on the previous observations, so each splits into a martingale average and
// a Cesaro average of remainders. Estimator sequences are truth plus a
// deterministic perturbation shrinking at a known rate; every conditional
// expectation is a quadrature over the covariate cube, never Monte Carlo.
//
// Covariates are X ~ Uniform[0, 1]^d. Observation i (1-based) consumes a
// fixed number of uniforms from the run's counter stream: d for X, then one
// per binary draw.

#ifndef CESARO_ONLINE_ESTIMATORS_HPP_
#define CESARO_ONLINE_ESTIMATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cesaro/experiment_result.hpp"
#include "cesaro/mc_engine.hpp"
#include "cesaro/philox.hpp"
#include "cesaro/quadrature.hpp"

namespace cesaro::online {

inline constexpr double kBayesPhase = 0.5;
inline constexpr double kMarPhaseG = 1.0;
inline constexpr double kMarPhaseQ = 1.3;

/// Identity tolerance for the decomposition residuals.
inline constexpr double kIdentityTolerance = 1e-9;
/// Slack allowed in the Cauchy-Schwarz remainder check.
inline constexpr double kIntegratorTolerance = 1e-8;

/// cos(2 pi sum_j x_j + phase).
double perturbation_profile(quad::Point x, double phase);

// ---------------------------------------------------------------- Bayes risk

class BayesRiskDGP {
 public:
  /// eta(x) = pr(Y = 1 | X = x). Throws std::invalid_argument if eta leaves
  /// [0, 1] on the quadrature grid.
  BayesRiskDGP(quad::Field eta, int dim, int points_per_axis = 0);

  /// eta = 0.5 + amplitude sin(2 pi x_1) (d = 1) or
  /// 0.5 + amplitude sin(2 pi x_1) cos(2 pi x_2) (d = 2).
  static BayesRiskDGP sine(int dim, double amplitude = 0.4,
                           int points_per_axis = 0);

  /// "sine" for the factory, "custom" otherwise; used as the family column.
  const std::string& label() const noexcept { return label_; }
  double eta(quad::Point x) const { return eta_(x); }
  int dim() const noexcept { return grid_.dim(); }
  /// R* = E min(eta, 1 - eta).
  double bayes_risk() const noexcept { return bayes_risk_; }
  const quad::TensorGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& eta_values() const noexcept { return eta_values_; }

 private:
  std::string label_ = "custom";
  quad::Field eta_;
  quad::TensorGrid grid_;
  std::vector<double> eta_values_;
  double bayes_risk_ = 0.0;
};

/// eta_hat_i = clamp(eta + i^{-rate_r} perturb_scale xi, 0, 1), with xi the
/// perturbation profile at kBayesPhase; f_hat_i = sign(2 eta_hat_i - 1),
/// sign(0) = +1, and f_hat_0 = +1 everywhere. With perturb_scale = 0 the
/// whole sequence, f_hat_0 included, is the Bayes rule.
struct EstimatorSchedule {
  double rate_r = 0.4;
  double perturb_scale = 0.3;

  bool operator==(const EstimatorSchedule&) const = default;
};

void validate(const EstimatorSchedule& sched);

/// Conditional risks of the whole estimator sequence for one DGP.
class BayesRiskPlan {
 public:
  BayesRiskPlan(BayesRiskDGP dgp, EstimatorSchedule sched);

  const BayesRiskDGP& dgp() const noexcept { return dgp_; }
  const EstimatorSchedule& schedule() const noexcept { return sched_; }

  /// Perturbation size of f_hat_i, i >= 1.
  double epsilon(std::uint64_t i) const;
  /// R(f_hat_i), misclassification risk.
  double risk(std::uint64_t i) const;
  /// R(f_hat_i) - R*.
  double excess(std::uint64_t i) const;
  /// f_hat_i(x) in {-1, +1}.
  int classify(std::uint64_t i, quad::Point x) const;

 private:
  BayesRiskDGP dgp_;
  EstimatorSchedule sched_;
  double risk_zero_ = 0.0;
  // Grid nodes where f_hat disagrees with the Bayes rule once epsilon
  // reaches the threshold, sorted by threshold; cum_weight_[j] is the
  // excess risk of the first j of them.
  std::vector<double> flip_at_;
  std::vector<double> cum_weight_;
};

struct DecompositionRow {
  std::uint64_t n = 0;
  double estimate = 0.0;  ///< R_hat_n or Psi_hat_n
  double truth = 0.0;     ///< R* or Psi
  double martingale = 0.0;
  double remainder_avg = 0.0;
  /// Remainder of the last estimator used, f_hat_{n-1} or P_hat_{n-1}.
  double per_step_remainder = 0.0;
  /// (estimate - truth) - (martingale + remainder_avg).
  double residual = 0.0;
  /// MAR only: Cauchy-Schwarz bound for per_step_remainder.
  double cs_bound = 0.0;
};

struct Decomposition {
  std::vector<DecompositionRow> rows;
  /// MAR only: largest |Rem_i| - bound_i over steps 0..n-1.
  double max_cs_excess = 0.0;

  double max_abs_residual() const;
};

/// 1, 2, 4, ... up to n, followed by n itself if not a power of two.
std::vector<std::uint64_t> dyadic_prefixes(std::uint64_t n);

/// R_hat_n = (1/n) sum l(f_hat_{i-1})(X_i, Y_i) with its decomposition at
/// each dyadic prefix. n >= 1.
Decomposition run_bayes_risk(const BayesRiskPlan& plan, std::uint64_t n,
                             Seed seed);
Decomposition run_bayes_risk(const BayesRiskDGP& dgp,
                             const EstimatorSchedule& sched, std::uint64_t n,
                             Seed seed);

/// diff_bound sqrt(2 ln(2 / conf) / n).
double azuma_bound(std::uint64_t n, double diff_bound, double conf);

// ----------------------------------------------------------------------- MAR

class MarDGP {
 public:
  /// g(x) = pr(R = 1 | X = x), q_bar(x) = E(Y | R = 1, X = x) in [0, 1].
  /// Throws std::invalid_argument if g leaves [g_floor, 1] or q_bar leaves
  /// [0, 1] on the grid.
  MarDGP(quad::Field g, quad::Field q_bar, double g_floor, int dim,
         int points_per_axis = 0);

  /// g = 0.6 + 0.3 cos(2 pi x_1), g_floor = 0.3,
  /// q_bar = 0.5 + 0.3 sin(2 pi x_1) + 0.1 x_d; Psi = 0.55.
  static MarDGP trig(int dim, int points_per_axis = 0);

  const std::string& label() const noexcept { return label_; }
  double g(quad::Point x) const { return g_(x); }
  double q_bar(quad::Point x) const { return q_(x); }
  double g_floor() const noexcept { return g_floor_; }
  double psi_true() const noexcept { return psi_; }
  int dim() const noexcept { return grid_.dim(); }
  const quad::TensorGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& g_values() const noexcept { return g_values_; }
  const std::vector<double>& q_values() const noexcept { return q_values_; }

 private:
  std::string label_ = "custom";
  quad::Field g_;
  quad::Field q_;
  double g_floor_;
  quad::TensorGrid grid_;
  std::vector<double> g_values_;
  std::vector<double> q_values_;
  double psi_ = 0.0;
};

/// g_hat_i = clamp(g + max(i,1)^{-rate_g} perturb_scale_g xi_g,
/// g_floor / 2, 1) and Q_hat_i = clamp(q_bar + max(i,1)^{-rate_q}
/// perturb_scale_q xi_q, 0, 1).
struct NuisanceSchedule {
  double rate_g = 0.3;
  double rate_q = 0.3;
  double perturb_scale_g = 0.2;
  double perturb_scale_q = 0.2;

  bool operator==(const NuisanceSchedule&) const = default;
};

void validate(const NuisanceSchedule& sched);

struct MarStep {
  double psi_plugin = 0.0;  ///< Psi(P_hat_i) = E Q_hat_i(X)
  double conditional = 0.0;  ///< E[phi_i(Z) | H_i]
  /// Rem(P_hat_i, P) = E[(g_hat - g)(Q_hat - q_bar) / g_hat].
  double remainder = 0.0;
  double g_error_l2 = 0.0;
  double q_error_l2 = 0.0;
  /// ||g_hat - g|| ||Q_hat - q_bar|| / min(g_floor, inf g_hat).
  double cs_bound = 0.0;
};

/// Per-step integrals for P_hat_0 .. P_hat_{n_max - 1}.
class MarPlan {
 public:
  MarPlan(MarDGP dgp, NuisanceSchedule sched, std::uint64_t n_max);

  const MarDGP& dgp() const noexcept { return dgp_; }
  const NuisanceSchedule& schedule() const noexcept { return sched_; }
  std::uint64_t n_max() const noexcept { return steps_.size(); }
  const MarStep& step(std::uint64_t i) const { return steps_.at(i); }

  double g_hat(std::uint64_t i, quad::Point x) const;
  double q_hat(std::uint64_t i, quad::Point x) const;

 private:
  MarDGP dgp_;
  NuisanceSchedule sched_;
  std::vector<MarStep> steps_;
};

/// Psi_hat_n = (1/n) sum Psi(P_hat_{i-1}) + D(P_hat_{i-1})(Z_i), with
/// D(P)(x, r, y) = r (y - Q(x)) / g(x) + Q(x) - Psi(P). n <= plan.n_max().
Decomposition run_mar_mean(const MarPlan& plan, std::uint64_t n, Seed seed);
Decomposition run_mar_mean(const MarDGP& dgp, const NuisanceSchedule& sched,
                           std::uint64_t n, Seed seed);

// ------------------------------------------------------------ replications

/// cfg.replications independent runs (replication r uses the stream
/// mc::replication_seed(cfg, r)). Rows per dyadic prefix: r_hat,
/// martingale_part, remainder_avg, per_step_remainder, max_abs_residual,
/// azuma_bound and azuma_violation_rate (confidence 0.05).
mc::ExperimentResult bayes_risk_experiment(const BayesRiskPlan& plan,
                                       std::uint64_t n,
                                       const mc::MonteCarloConfig& cfg);

/// Rows per dyadic prefix: psi_hat, martingale_part, remainder_avg,
/// per_step_remainder, cs_bound, max_abs_residual, scaled_remainder
/// (sqrt(n) remainder_avg) and scaled_error_var (variance of
/// sqrt(n)(Psi_hat - Psi)). Residual or Cauchy-Schwarz failures raise flags.
mc::ExperimentResult mar_mean_experiment(const MarPlan& plan, std::uint64_t n,
                                     const mc::MonteCarloConfig& cfg);

}  // namespace cesaro::online

#endif  // CESARO_ONLINE_ESTIMATORS_HPP_
