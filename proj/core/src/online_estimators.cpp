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


#include "cesaro/online_estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cesaro/core_math.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/wilson.hpp"

namespace cesaro::online {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAzumaConfidence = 0.05;

void require_finite_nonneg(double v, const char* field, bool strict) {
  if (!std::isfinite(v) || (strict ? v <= 0.0 : v < 0.0)) {
    throw ParamError(field, std::string(field) +
                                (strict ? " must be > 0" : " must be >= 0"));
  }
}

/// Fills x with d uniforms from the stream.
void draw_point(CounterStream& rs, int dim, std::array<double, 2>& x) {
  for (int j = 0; j < dim; ++j) x[static_cast<std::size_t>(j)] = rs.next();
}

bool is_prefix_end(std::uint64_t i, std::uint64_t n) {
  return std::has_single_bit(i) || i == n;
}

}  // namespace

double perturbation_profile(quad::Point x, double phase) {
  double s = 0.0;
  for (double v : x) s += v;
  return std::cos(kTwoPi * s + phase);
}

std::vector<std::uint64_t> dyadic_prefixes(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 1; p <= n && p != 0; p <<= 1) out.push_back(p);
  if (n >= 1 && !std::has_single_bit(n)) out.push_back(n);
  return out;
}

double Decomposition::max_abs_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.residual));
  return m;
}

double azuma_bound(std::uint64_t n, double diff_bound, double conf) {
  if (n < 1) throw DomainError("azuma_bound needs n >= 1");
  if (!(diff_bound > 0.0)) throw DomainError("diff_bound must be > 0");
  if (!(conf > 0.0 && conf < 1.0)) throw DomainError("conf must lie in (0, 1)");
  return diff_bound *
         std::sqrt(2.0 * std::log(2.0 / conf) / static_cast<double>(n));
}

// ---------------------------------------------------------------- Bayes risk

BayesRiskDGP::BayesRiskDGP(quad::Field eta, int dim, int points_per_axis)
    : eta_(std::move(eta)), grid_(dim, points_per_axis) {
  eta_values_ = grid_.evaluate(eta_);
  std::vector<double> loss(eta_values_.size());
  for (std::size_t k = 0; k < loss.size(); ++k) {
    const double e = eta_values_[k];
    if (!(e >= 0.0 && e <= 1.0)) {
      throw std::invalid_argument("eta must map into [0, 1]");
    }
    loss[k] = std::min(e, 1.0 - e);
  }
  bayes_risk_ = grid_.integrate_values(loss);
}

BayesRiskDGP BayesRiskDGP::sine(int dim, double amplitude,
                                int points_per_axis) {
  if (!(amplitude >= 0.0 && amplitude <= 0.5)) {
    throw ParamError("amplitude", "amplitude must lie in [0, 0.5]");
  }
  quad::Field eta;
  if (dim == 2) {
    eta = [amplitude](quad::Point x) {
      return 0.5 +
             amplitude * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]);
    };
  } else {
    eta = [amplitude](quad::Point x) {
      return 0.5 + amplitude * std::sin(kTwoPi * x[0]);
    };
  }
  BayesRiskDGP dgp(std::move(eta), dim, points_per_axis);
  dgp.label_ = "sine";
  return dgp;
}

void validate(const EstimatorSchedule& sched) {
  require_finite_nonneg(sched.rate_r, "rate_r", true);
  require_finite_nonneg(sched.perturb_scale, "perturb_scale", false);
}

BayesRiskPlan::BayesRiskPlan(BayesRiskDGP dgp, EstimatorSchedule sched)
    : dgp_(std::move(dgp)), sched_(sched) {
  validate(sched_);
  const auto& grid = dgp_.grid();
  const auto& eta = dgp_.eta_values();

  std::vector<double> one_minus(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) one_minus[k] = 1.0 - eta[k];
  risk_zero_ = grid.integrate_values(one_minus);

  // f_hat flips away from the Bayes rule at node k once epsilon reaches
  // |eta - 1/2| / |xi|, on the side where xi pushes eta across 1/2.
  std::vector<std::pair<double, double>> flips;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = perturbation_profile(grid.point(k), kBayesPhase);
    const double gap = eta[k] - 0.5;
    const bool crosses = gap >= 0.0 ? xi < 0.0 : xi > 0.0;
    if (!crosses) continue;
    flips.emplace_back(std::abs(gap) / std::abs(xi),
                       grid.weights()[k] * 2.0 * std::abs(gap));
  }
  std::sort(flips.begin(), flips.end());
  flip_at_.reserve(flips.size());
  cum_weight_.reserve(flips.size() + 1);
  math::CompensatedSum acc;
  cum_weight_.push_back(0.0);
  for (const auto& [t, w] : flips) {
    flip_at_.push_back(t);
    acc.add(w);
    cum_weight_.push_back(acc.value());
  }
}

double BayesRiskPlan::epsilon(std::uint64_t i) const {
  if (i == 0) throw DomainError("epsilon is defined for i >= 1");
  return sched_.perturb_scale *
         std::pow(static_cast<double>(i), -sched_.rate_r);
}

double BayesRiskPlan::excess(std::uint64_t i) const {
  if (sched_.perturb_scale == 0.0) return 0.0;
  if (i == 0) return risk_zero_ - dgp_.bayes_risk();
  const double eps = epsilon(i);
  const auto j = static_cast<std::size_t>(
      std::upper_bound(flip_at_.begin(), flip_at_.end(), eps) -
      flip_at_.begin());
  return cum_weight_[j];
}

double BayesRiskPlan::risk(std::uint64_t i) const {
  if (sched_.perturb_scale != 0.0 && i == 0) return risk_zero_;
  return dgp_.bayes_risk() + excess(i);
}

int BayesRiskPlan::classify(std::uint64_t i, quad::Point x) const {
  const double eta = dgp_.eta(x);
  if (sched_.perturb_scale == 0.0) return eta >= 0.5 ? 1 : -1;
  if (i == 0) return 1;
  const double score = eta + epsilon(i) * perturbation_profile(x, kBayesPhase);
  return std::clamp(score, 0.0, 1.0) >= 0.5 ? 1 : -1;
}

Decomposition run_bayes_risk(const BayesRiskPlan& plan, std::uint64_t n,
                             Seed seed) {
  if (n < 1) throw DomainError("run_bayes_risk needs n >= 1");
  const auto& dgp = plan.dgp();
  const int dim = dgp.dim();
  const double r_star = dgp.bayes_risk();

  CounterStream rs(seed);
  std::array<double, 2> buf{};
  const quad::Point x(buf.data(), static_cast<std::size_t>(dim));
  math::CompensatedSum loss_sum;
  math::CompensatedSum diff_sum;
  math::CompensatedSum rem_sum;
  Decomposition out;

  for (std::uint64_t i = 1; i <= n; ++i) {
    draw_point(rs, dim, buf);
    const bool y = rs.next() < dgp.eta(x);
    const int f = plan.classify(i - 1, x);
    const double loss = (f == 1) != y ? 1.0 : 0.0;
    const double cond = plan.risk(i - 1);
    const double excess = plan.excess(i - 1);
    loss_sum.add(loss);
    diff_sum.add(loss - cond);
    rem_sum.add(excess);

    if (!is_prefix_end(i, n)) continue;
    const double dn = static_cast<double>(i);
    DecompositionRow row;
    row.n = i;
    row.estimate = loss_sum.value() / dn;
    row.truth = r_star;
    row.martingale = diff_sum.value() / dn;
    row.remainder_avg = rem_sum.value() / dn;
    row.per_step_remainder = excess;
    row.residual =
        (row.estimate - row.truth) - (row.martingale + row.remainder_avg);
    out.rows.push_back(row);
  }
  return out;
}

Decomposition run_bayes_risk(const BayesRiskDGP& dgp,
                             const EstimatorSchedule& sched, std::uint64_t n,
                             Seed seed) {
  return run_bayes_risk(BayesRiskPlan(dgp, sched), n, seed);
}

// ----------------------------------------------------------------------- MAR

MarDGP::MarDGP(quad::Field g, quad::Field q_bar, double g_floor, int dim,
               int points_per_axis)
    : g_(std::move(g)),
      q_(std::move(q_bar)),
      g_floor_(g_floor),
      grid_(dim, points_per_axis) {
  if (!(g_floor_ > 0.0 && g_floor_ <= 1.0)) {
    throw ParamError("g_floor", "g_floor must lie in (0, 1]");
  }
  g_values_ = grid_.evaluate(g_);
  q_values_ = grid_.evaluate(q_);
  for (std::size_t k = 0; k < g_values_.size(); ++k) {
    if (!(g_values_[k] >= g_floor_ && g_values_[k] <= 1.0)) {
      throw std::invalid_argument("g must lie in [g_floor, 1]");
    }
    if (!(q_values_[k] >= 0.0 && q_values_[k] <= 1.0)) {
      throw std::invalid_argument("q_bar must lie in [0, 1]");
    }
  }
  psi_ = grid_.integrate_values(q_values_);
}

MarDGP MarDGP::trig(int dim, int points_per_axis) {
  MarDGP dgp(
      [](quad::Point x) { return 0.6 + 0.3 * std::cos(kTwoPi * x[0]); },
      [](quad::Point x) {
        return 0.5 + 0.3 * std::sin(kTwoPi * x[0]) + 0.1 * x[x.size() - 1];
      },
      0.3, dim, points_per_axis);
  dgp.label_ = "trig";
  return dgp;
}

void validate(const NuisanceSchedule& sched) {
  require_finite_nonneg(sched.rate_g, "rate_g", true);
  require_finite_nonneg(sched.rate_q, "rate_q", true);
  require_finite_nonneg(sched.perturb_scale_g, "perturb_scale_g", false);
  require_finite_nonneg(sched.perturb_scale_q, "perturb_scale_q", false);
}

namespace {

double shrink(std::uint64_t i, double rate, double scale) {
  return scale * std::pow(static_cast<double>(std::max<std::uint64_t>(i, 1)),
                          -rate);
}

}  // namespace

double MarPlan::g_hat(std::uint64_t i, quad::Point x) const {
  const double eps = shrink(i, sched_.rate_g, sched_.perturb_scale_g);
  return std::clamp(dgp_.g(x) + eps * perturbation_profile(x, kMarPhaseG),
                    0.5 * dgp_.g_floor(), 1.0);
}

double MarPlan::q_hat(std::uint64_t i, quad::Point x) const {
  const double eps = shrink(i, sched_.rate_q, sched_.perturb_scale_q);
  return std::clamp(dgp_.q_bar(x) + eps * perturbation_profile(x, kMarPhaseQ),
                    0.0, 1.0);
}

MarPlan::MarPlan(MarDGP dgp, NuisanceSchedule sched, std::uint64_t n_max)
    : dgp_(std::move(dgp)), sched_(sched) {
  validate(sched_);
  if (n_max < 1) throw DomainError("MarPlan needs n_max >= 1");
  const auto& grid = dgp_.grid();
  const auto& g = dgp_.g_values();
  const auto& q = dgp_.q_values();
  const auto w = grid.weights();
  const std::size_t size = grid.size();
  std::vector<double> xi_g(size);
  std::vector<double> xi_q(size);
  for (std::size_t k = 0; k < size; ++k) {
    xi_g[k] = perturbation_profile(grid.point(k), kMarPhaseG);
    xi_q[k] = perturbation_profile(grid.point(k), kMarPhaseQ);
  }
  const double g_low = 0.5 * dgp_.g_floor();

  steps_.resize(n_max);
  for (std::uint64_t i = 0; i < n_max; ++i) {
    if (i == 1) {  // P_hat_1 = P_hat_0
      steps_[1] = steps_[0];
      continue;
    }
    const double eg = shrink(i, sched_.rate_g, sched_.perturb_scale_g);
    const double eq = shrink(i, sched_.rate_q, sched_.perturb_scale_q);
    math::CompensatedSum plugin, cond, rem, gerr, qerr;
    double g_min = 1.0;
    for (std::size_t k = 0; k < size; ++k) {
      const double gh = std::clamp(g[k] + eg * xi_g[k], g_low, 1.0);
      const double qh = std::clamp(q[k] + eq * xi_q[k], 0.0, 1.0);
      const double dg = gh - g[k];
      const double dq = qh - q[k];
      g_min = std::min(g_min, gh);
      plugin.add(w[k] * qh);
      cond.add(w[k] * (g[k] * (q[k] - qh) / gh + qh));
      rem.add(w[k] * dg * dq / gh);
      gerr.add(w[k] * dg * dg);
      qerr.add(w[k] * dq * dq);
    }
    MarStep& s = steps_[i];
    s.psi_plugin = plugin.value();
    s.conditional = cond.value();
    s.remainder = rem.value();
    s.g_error_l2 = std::sqrt(std::max(0.0, gerr.value()));
    s.q_error_l2 = std::sqrt(std::max(0.0, qerr.value()));
    s.cs_bound = s.g_error_l2 * s.q_error_l2 /
                 std::min(dgp_.g_floor(), g_min);
  }
}

Decomposition run_mar_mean(const MarPlan& plan, std::uint64_t n, Seed seed) {
  if (n < 1) throw DomainError("run_mar_mean needs n >= 1");
  if (n > plan.n_max()) {
    throw DomainError("run_mar_mean: n exceeds the plan's n_max");
  }
  const auto& dgp = plan.dgp();
  const int dim = dgp.dim();
  const double psi = dgp.psi_true();

  CounterStream rs(seed);
  std::array<double, 2> buf{};
  const quad::Point x(buf.data(), static_cast<std::size_t>(dim));
  math::CompensatedSum est_sum;
  math::CompensatedSum diff_sum;
  math::CompensatedSum rem_sum;
  Decomposition out;

  for (std::uint64_t i = 1; i <= n; ++i) {
    draw_point(rs, dim, buf);
    const bool observed = rs.next() < dgp.g(x);
    const double y = rs.next() < dgp.q_bar(x) ? 1.0 : 0.0;
    const MarStep& step = plan.step(i - 1);
    const double qh = plan.q_hat(i - 1, x);
    // Psi(P_hat) + D(P_hat)(Z_i); Z_i = (X_i, R_i, R_i Y_i).
    const double phi =
        observed ? (y - qh) / plan.g_hat(i - 1, x) + qh : qh;
    est_sum.add(phi);
    diff_sum.add(phi - step.conditional);
    rem_sum.add(step.remainder);
    out.max_cs_excess = std::max(out.max_cs_excess,
                                 std::abs(step.remainder) - step.cs_bound);

    if (!is_prefix_end(i, n)) continue;
    const double dn = static_cast<double>(i);
    DecompositionRow row;
    row.n = i;
    row.estimate = est_sum.value() / dn;
    row.truth = psi;
    row.martingale = diff_sum.value() / dn;
    row.remainder_avg = rem_sum.value() / dn;
    row.per_step_remainder = step.remainder;
    row.cs_bound = step.cs_bound;
    row.residual =
        (row.estimate - row.truth) - (row.martingale + row.remainder_avg);
    out.rows.push_back(row);
  }
  return out;
}

Decomposition run_mar_mean(const MarDGP& dgp, const NuisanceSchedule& sched,
                           std::uint64_t n, Seed seed) {
  return run_mar_mean(MarPlan(dgp, sched, n), n, seed);
}

// ------------------------------------------------------------ replications

namespace {

std::vector<Decomposition> replicate(
    const mc::MonteCarloConfig& cfg,
    const std::function<Decomposition(Seed)>& run) {
  mc::validate(cfg);
  return mc::run_replications<Decomposition>(
      cfg, [&](std::uint64_t r) { return run(mc::replication_seed(cfg, r)); });
}

std::vector<double> column(const std::vector<Decomposition>& runs,
                           std::size_t j, double DecompositionRow::*field) {
  std::vector<double> out(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) out[r] = runs[r].rows[j].*field;
  return out;
}

double max_residual(const std::vector<Decomposition>& runs, std::size_t j) {
  double m = 0.0;
  for (const auto& run : runs) m = std::max(m, std::abs(run.rows[j].residual));
  return m;
}

mc::ResultRow make_row(std::string_view experiment, std::string_view family,
                   std::uint64_t n, std::string statistic, double value,
                   const mc::MonteCarloConfig& cfg,
                   std::optional<double> lo = std::nullopt,
                   std::optional<double> hi = std::nullopt) {
  return mc::ResultRow{std::string(experiment), std::string(family), n,
                   std::nullopt, std::move(statistic), value, lo, hi,
                   cfg.replications, cfg.seed.value};
}

nlohmann::json online_metadata(std::string_view operation,
                               const mc::MonteCarloConfig& cfg, int dim,
                               int points_per_axis) {
  return {{"operation", operation},
          {"replications", cfg.replications},
          {"confidence", cfg.confidence},
          {"seed", cfg.seed.value},
          {"stream_base", cfg.seed.stream_id},
          {"dim", dim},
          {"points_per_axis", points_per_axis}};
}

}  // namespace

mc::ExperimentResult bayes_risk_experiment(const BayesRiskPlan& plan,
                                       std::uint64_t n,
                                       const mc::MonteCarloConfig& cfg) {
  const auto runs = replicate(
      cfg, [&](Seed s) { return run_bayes_risk(plan, n, s); });
  const double z = mc::two_sided_z(cfg.confidence);
  const auto& dgp = plan.dgp();
  const std::string_view exp = "bayes_risk";

  mc::ExperimentResult result;
  result.metadata = online_metadata("bayes_risk_experiment", cfg, dgp.dim(),
                                    dgp.grid().points_per_axis());
  result.metadata["rate_r"] = plan.schedule().rate_r;
  result.metadata["perturb_scale"] = plan.schedule().perturb_scale;
  result.metadata["bayes_risk"] = dgp.bayes_risk();

  const auto prefixes = dyadic_prefixes(n);
  for (std::size_t j = 0; j < prefixes.size(); ++j) {
    const std::uint64_t m = prefixes[j];
    const auto& first = runs.front().rows[j];
    const auto est = mc::mean_estimate(column(runs, j, &DecompositionRow::estimate));
    const auto mart = column(runs, j, &DecompositionRow::martingale);
    const auto mart_est = mc::mean_estimate(mart);
    const double bound = azuma_bound(m, 1.0, kAzumaConfidence);
    std::uint64_t violations = 0;
    for (double v : mart) violations += std::abs(v) > bound;
    const auto rate = mc::wilson_estimate(violations, runs.size(), cfg.confidence);
    const double resid = max_residual(runs, j);

    auto& rows = result.rows;
    rows.push_back(make_row(exp, dgp.label(), m, "r_hat", est.mean, cfg,
                            est.mean - z * est.se, est.mean + z * est.se));
    rows.push_back(make_row(exp, dgp.label(), m, "martingale_part",
                            mart_est.mean, cfg, mart_est.mean - z * mart_est.se,
                            mart_est.mean + z * mart_est.se));
    rows.push_back(make_row(exp, dgp.label(), m, "remainder_avg",
                            first.remainder_avg, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "per_step_remainder",
                            first.per_step_remainder, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "max_abs_residual", resid, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "azuma_bound", bound, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "azuma_violation_rate",
                            rate.p_hat, cfg, rate.ci_low, rate.ci_high));
    if (resid > kIdentityTolerance) {
      result.flags.push_back("decomposition residual " + mc::format_double(resid) +
                             " at n=" + std::to_string(m));
    }
  }
  return result;
}

mc::ExperimentResult mar_mean_experiment(const MarPlan& plan, std::uint64_t n,
                                     const mc::MonteCarloConfig& cfg) {
  const auto runs =
      replicate(cfg, [&](Seed s) { return run_mar_mean(plan, n, s); });
  const double z = mc::two_sided_z(cfg.confidence);
  const auto& dgp = plan.dgp();
  const std::string_view exp = "mar_mean";

  mc::ExperimentResult result;
  result.metadata = online_metadata("mar_mean_experiment", cfg, dgp.dim(),
                                    dgp.grid().points_per_axis());
  const auto& sched = plan.schedule();
  result.metadata["rate_g"] = sched.rate_g;
  result.metadata["rate_q"] = sched.rate_q;
  result.metadata["perturb_scale_g"] = sched.perturb_scale_g;
  result.metadata["perturb_scale_q"] = sched.perturb_scale_q;
  result.metadata["psi_true"] = dgp.psi_true();
  result.metadata["g_floor"] = dgp.g_floor();

  double cs_excess = -std::numeric_limits<double>::infinity();
  std::uint64_t step = 0;
  const auto prefixes = dyadic_prefixes(n);
  for (std::size_t j = 0; j < prefixes.size(); ++j) {
    const std::uint64_t m = prefixes[j];
    for (; step < m; ++step) {
      const auto& s = plan.step(step);
      cs_excess = std::max(cs_excess, std::abs(s.remainder) - s.cs_bound);
    }
    const auto& first = runs.front().rows[j];
    const auto est = mc::mean_estimate(column(runs, j, &DecompositionRow::estimate));
    const auto mart = mc::mean_estimate(column(runs, j, &DecompositionRow::martingale));
    std::vector<double> scaled_err = column(runs, j, &DecompositionRow::estimate);
    const double root_n = std::sqrt(static_cast<double>(m));
    for (double& v : scaled_err) v = root_n * (v - dgp.psi_true());
    const auto err = mc::mean_estimate(scaled_err);
    const double var = err.count > 1
                           ? err.se * err.se * static_cast<double>(err.count)
                           : std::nan("");
    const double resid = max_residual(runs, j);

    auto& rows = result.rows;
    rows.push_back(make_row(exp, dgp.label(), m, "psi_hat", est.mean, cfg,
                            est.mean - z * est.se, est.mean + z * est.se));
    rows.push_back(make_row(exp, dgp.label(), m, "martingale_part", mart.mean,
                            cfg, mart.mean - z * mart.se,
                            mart.mean + z * mart.se));
    rows.push_back(make_row(exp, dgp.label(), m, "remainder_avg",
                            first.remainder_avg, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "per_step_remainder",
                            first.per_step_remainder, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "cs_bound", first.cs_bound, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "cs_max_excess", cs_excess, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "max_abs_residual", resid, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "scaled_remainder",
                            root_n * first.remainder_avg, cfg));
    rows.push_back(make_row(exp, dgp.label(), m, "scaled_error_var", var, cfg));
    if (resid > kIdentityTolerance) {
      result.flags.push_back("decomposition residual " + mc::format_double(resid) +
                             " at n=" + std::to_string(m));
    }
  }
  if (cs_excess > kIntegratorTolerance) {
    result.flags.push_back("Cauchy-Schwarz remainder bound exceeded by " +
                           mc::format_double(cs_excess));
  }
  return result;
}

}  // namespace cesaro::online
