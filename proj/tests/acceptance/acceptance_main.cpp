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


// Acceptance gate: runs the shipped acceptance configs and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any line fails.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cesaro/bounds.hpp"
#include "cesaro/cli/config.hpp"
#include "cesaro/cli/runner.hpp"
#include "cesaro/mc_engine.hpp"
#include "cesaro/sequence_models.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cesaro;
using cesaro::mc::ExperimentResult;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      detail << " [" << why << "]";
    }
  }
};

struct Loaded {
  cli::RunConfig config;
  ExperimentResult result;
};

double binom_se(double p, double reps) { return std::sqrt(p * (1 - p) / reps); }

double value(const ExperimentResult& r, const char* stat, std::uint64_t n,
             std::optional<double> t = std::nullopt) {
  const auto* row = r.find(stat, n, t);
  if (row == nullptr) {
    throw std::runtime_error(std::string("missing row ") + stat + " n=" +
                             std::to_string(n));
  }
  return row->value;
}

std::string fmt(double x) { return mc::format_double(x); }

Verdict a1(const Loaded& in) {
  Verdict v;
  const auto& p = std::get<cli::CounterexampleParams>(in.config.params);
  const auto& s = *std::get<seq::SequenceSpec>(in.config.family).get_if<seq::CounterexampleSpec>();
  const double reps = static_cast<double>(in.config.mc.replications);
  double prev = -1, prev_se = 0;
  for (int k : p.k_grid) {
    const std::uint64_t n = (std::uint64_t{1} << k) - 1;
    const double ph = value(in.result, "tail_prob", n, p.M);
    const double se = binom_se(ph, reps);
    const double margin = bounds::berry_esseen_margin(n + 1, s.alpha, s.beta, p.M);
    v.detail << " k=" << k << ":" << fmt(ph);
    v.require(ph >= margin - 3 * se, "k=" + std::to_string(k) + " below BE margin " + fmt(margin));
    if (prev >= 0) {
      v.require(ph >= prev - 2 * std::hypot(se, prev_se),
                "decrease at k=" + std::to_string(k));
    }
    prev = ph;
    prev_se = se;
  }
  v.require(prev >= 0.99, "final estimate < 0.99");
  return v;
}

Verdict a2(const Loaded& in) {
  Verdict v;
  const auto& grid = std::get<cli::L1Params>(in.config.params).n_grid;
  std::vector<double> val, se;
  for (auto n : grid) {
    val.push_back(value(in.result, "scaled_l1", n));
    se.push_back(value(in.result, "scaled_l1_se", n));
    v.detail << " n=" << n << ":" << fmt(val.back()) << "±" << fmt(se.back());
  }
  for (std::size_t j = 1; j < val.size(); ++j) {
    v.require(val[j - 1] - val[j] > 3 * std::hypot(se[j - 1], se[j]),
              "not strictly decreasing at n=" + std::to_string(grid[j]));
  }
  const double gap = 0.5 * val.front() - val.back();
  const double pooled = std::hypot(0.5 * se.front(), se.back());
  v.detail << " ratio=" << fmt(val.back() / val.front());
  v.require(gap > 3 * pooled, "final > 0.5 x first");
  return v;
}

Verdict a3(const Loaded& in) {
  Verdict v;
  const auto& p = std::get<cli::L1Params>(in.config.params);
  const auto& s = *std::get<seq::SequenceSpec>(in.config.family).get_if<seq::PowerLawSpec>();
  for (auto n : p.n_grid) {
    // E X_i = i^-r spread / 2.
    const double exact = std::pow(static_cast<double>(n), p.beta) * 0.5 * s.spread *
                         static_cast<double>(oracle::power_mean(n, s.r));
    const double est = value(in.result, "scaled_l1", n);
    const double se = value(in.result, "scaled_l1_se", n);
    v.detail << " n=" << n << ":" << fmt(est) << " vs " << fmt(exact);
    v.require(std::abs(est - exact) <= 3 * se, "n=" + std::to_string(n) + " off by > 3 SE");
  }
  return v;
}

Verdict a4(const Loaded& in) {
  Verdict v;
  int cells = 0, informative = 0;
  for (const auto* row : in.result.select("analytic_bound")) {
    ++cells;
    if (row->value < 1) ++informative;
    const double low = in.result.find("empirical_exceed", row->n, row->threshold)->ci_low.value_or(0.0);
    v.require(!(row->value < 1 && low > row->value),
              "violation at n=" + std::to_string(row->n) + " y=" + fmt(row->threshold.value_or(0)));
  }
  v.detail << " cells=" << cells << " bound<1 in " << informative
           << " flags=" << in.result.flags.size();
  v.require(in.result.flags.empty(), "flags raised");
  v.require(cells > 0, "no cells");
  return v;
}

Verdict a5() {
  Verdict v;
  double worst_quad = 0, worst_rec = 0;
  for (int q = 0; q <= 5; ++q) {
    for (double a : {1.0, 2.0, 10.0}) {
      for (double c : {0.5, 1.0, 2.0}) {
        const double closed = bounds::exp_poly_integral(q, a, c);
        const double quad = oracle::exp_poly_quadrature(q, a, c);
        worst_quad = std::max(worst_quad, std::abs(closed - quad) / quad);
        if (q > 0) {
          const double rec = std::pow(a, q) * std::exp(-c * a) / c +
                             q / c * bounds::exp_poly_integral(q - 1, a, c);
          worst_rec = std::max(worst_rec, std::abs(closed - rec) / closed);
        }
        v.require(bounds::exp_poly_integral_bound(q, a, c) >= closed,
                  "bound fails at q=" + std::to_string(q));
      }
    }
  }
  v.detail << " quad_rel=" << fmt(worst_quad) << " recursion_rel=" << fmt(worst_rec);
  v.require(worst_quad <= 1e-8, "quadrature mismatch");
  v.require(worst_rec <= 1e-12, "recursion mismatch");
  return v;
}

Verdict a6(const Loaded& in) {
  Verdict v;
  const auto& p = std::get<cli::AsDiagParams>(in.config.params);
  const auto& spec = std::get<seq::SequenceSpec>(in.config.family);
  const double reps = static_cast<double>(in.config.mc.replications);
  const double lo = value(in.result, "sup_exceed_prob", p.m_grid.front(), p.epsilon);
  const double hi = value(in.result, "sup_exceed_prob", p.m_grid.back(), p.epsilon);
  const double pooled = std::hypot(binom_se(lo, reps), binom_se(hi, reps));
  v.detail << " m=" << p.m_grid.front() << ":" << fmt(lo) << " m=" << p.m_grid.back()
           << ":" << fmt(hi);
  v.require(hi <= lo + 2 * pooled, "sup exceedance grows with m");

  // Spot-check per-index tails pr(i^beta |X_i| > x) against the closed form.
  const auto& bc = *spec.get_if<seq::BorelCantelliSpec>();
  mc::MonteCarloConfig cfg;
  cfg.replications = in.config.mc.replications;
  cfg.seed = Seed{in.config.seed, 0};
  cfg.n_grid = {2, 4, 8, 16};
  const std::vector<double> x{p.epsilon, 1.0};
  const auto tails = mc::aui_tail_diagnostic(spec, math::ScaledRate(bc.beta), 1.0, x, cfg);
  int checked = 0;
  for (auto i : cfg.n_grid) {
    for (double xx : x) {
      const double exact = seq::borel_cantelli_tail(i, bc.a, bc.s, xx);
      const double est = value(tails, "exceed_prob", i, xx);
      ++checked;
      v.require(std::abs(est - exact) <= 3 * binom_se(exact, reps),
                "tail i=" + std::to_string(i) + " x=" + fmt(xx));
    }
  }
  v.detail << " tails_checked=" << checked;
  return v;
}

Verdict a7(const Loaded& in) {
  Verdict v;
  const auto& s = *std::get<seq::SequenceSpec>(in.config.family).get_if<seq::SupermartingaleSpec>();
  for (auto n : std::get<cli::SupermartParams>(in.config.params).n_grid) {
    const double r = value(in.result, "supermart_ratio", n);
    const double se = value(in.result, "supermart_ratio_se", n);
    v.detail << " n=" << n << ":" << fmt(r) << "±" << fmt(se);
    v.require(std::abs(r - s.contraction) <= 3 * se, "n=" + std::to_string(n));
  }
  return v;
}

Verdict a8(const Loaded& bayes, const Loaded& mar) {
  Verdict v;
  double resid = 0;
  for (const auto* r : bayes.result.select("max_abs_residual")) resid = std::max(resid, r->value);
  for (const auto* r : mar.result.select("max_abs_residual")) resid = std::max(resid, r->value);
  v.require(resid <= online::kIdentityTolerance, "identity residual");

  double cs = -INFINITY;
  for (const auto* r : mar.result.select("cs_max_excess")) cs = std::max(cs, r->value);
  v.require(cs <= online::kIntegratorTolerance, "Cauchy-Schwarz excess");

  const auto n = std::get<cli::MarMeanParams>(mar.config.params).n;
  const double early = value(mar.result, "scaled_remainder", 256);
  const double late = value(mar.result, "scaled_remainder", n);
  v.require(late < early, "scaled remainder not decreasing");

  const double reps = static_cast<double>(bayes.config.mc.replications);
  const double cap = 0.05 + 3 * binom_se(0.05, reps);
  double worst = 0;
  for (const auto* r : bayes.result.select("azuma_violation_rate")) worst = std::max(worst, r->value);
  v.require(worst <= cap, "Azuma violation rate");

  v.detail << " residual=" << fmt(resid) << " cs_excess=" << fmt(cs)
           << " scaled_rem(256)=" << fmt(early) << " scaled_rem(" << n << ")=" << fmt(late)
           << " azuma_rate=" << fmt(worst) << " flags="
           << bayes.result.flags.size() + mar.result.flags.size();
  v.require(bayes.result.flags.empty() && mar.result.flags.empty(), "flags raised");
  return v;
}

Verdict a9(const std::map<std::string, Loaded>& all) {
  Verdict v;
  for (const auto& [name, in] : all) {
    const std::string ref = mc::to_csv(in.result);
    for (unsigned w : {1u, 4u, 8u}) {
      cli::RunOverrides o;
      o.workers = w;
      const auto again = cli::execute(cli::apply_overrides(in.config, o));
      v.require(mc::to_csv(again) == ref, name + " workers=" + std::to_string(w));
    }
  }
  v.detail << " configs=" << all.size() << " workers=1,4,8";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string dir;
  app.add_option("--config-dir", dir, "Directory of acceptance configs")->required();
  CLI11_PARSE(app, argc, argv);

  std::map<std::string, Loaded> loaded;
  try {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() != ".json") continue;
      Loaded l;
      l.config = cli::load_config(e.path().string());
      l.result = cli::execute(l.config);
      loaded.emplace(e.path().stem().string(), std::move(l));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  const auto need = [&](const std::string& stem) -> const Loaded& {
    const auto it = loaded.find(stem);
    if (it == loaded.end()) throw std::runtime_error("missing config " + stem);
    return it->second;
  };

  const std::vector<std::pair<std::string, std::function<Verdict()>>> checks{
      {"A1", [&] { return a1(need("a1_counterexample")); }},
      {"A2", [&] { return a2(need("a2_l1_counterexample")); }},
      {"A3", [&] { return a3(need("a3_l1_power_law")); }},
      {"A4", [&] { return a4(need("a4_expbound")); }},
      {"A5", [&] { return a5(); }},
      {"A6", [&] { return a6(need("a6_as_diag")); }},
      {"A7", [&] { return a7(need("a7_supermart")); }},
      {"A8", [&] { return a8(need("a8_bayes_risk"), need("a8_mar_mean")); }},
      {"A9", [&] { return a9(loaded); }},
  };

  int failures = 0;
  for (const auto& [id, fn] : checks) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [error: " << e.what() << "]";
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s %s%s\n", id.c_str(), v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
