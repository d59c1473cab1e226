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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cesaro/errors.hpp"
#include "cesaro/mc_engine.hpp"
#include "oracles.hpp"

namespace {

using namespace cesaro;
using namespace cesaro::mc;

MonteCarloConfig config(std::uint64_t reps, std::vector<std::uint64_t> grid,
                        unsigned workers = 1) {
  MonteCarloConfig cfg;
  cfg.replications = reps;
  cfg.seed = Seed{1234, 0};
  cfg.n_grid = std::move(grid);
  cfg.workers = workers;
  return cfg;
}

TEST(Validate, Config) {
  EXPECT_NO_THROW(validate(config(30, {1, 2})));
  EXPECT_THROW(validate(config(29, {1})), ConfigError);
  EXPECT_NO_THROW(validate(config(29, {1}), false));
  EXPECT_THROW(validate(config(30, {2, 2})), ConfigError);
  EXPECT_THROW(validate(config(30, {0, 2})), ConfigError);
  auto cfg = config(30, {1});
  cfg.confidence = 1.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = config(30, {1});
  cfg.workers = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> seen(1000);
  parallel_for(1000, 4, [&](std::uint64_t r) { seen[r]++; });
  for (auto& s : seen) EXPECT_EQ(s.load(), 1);
}

TEST(ParallelFor, ReportsFailingReplication) {
  try {
    parallel_for(100, 1, [](std::uint64_t r) {
      if (r == 37 || r == 80) throw std::runtime_error("boom");
    });
    FAIL();
  } catch (const WorkerError& e) {
    EXPECT_EQ(e.replication(), 37u);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::uint64_t r) {
                              if (r == 5) throw std::runtime_error("x");
                            }),
               WorkerError);
}

TEST(MeanEstimate, Values) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_estimate(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.se, std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_EQ(m.count, 4u);
  EXPECT_TRUE(std::isnan(mean_estimate({}).mean));
}

TEST(EstimateTailProb, PowerLawHasTrivialTails) {
  const seq::SequenceSpec spec(seq::PowerLawSpec{0.8, 2});
  const auto cfg = config(200, {100});
  // n^0.5 Xbar_n stays below 10 for n = 100 (max 2 n^0.5 (1/n) sum i^-0.8).
  const auto est = estimate_tail_prob(spec, math::ScaledRate(0.5), 100, 10, cfg);
  EXPECT_EQ(est.successes, 0u);
  EXPECT_EQ(est.ci_low, 0.0);
  EXPECT_THROW(estimate_tail_prob(spec, math::ScaledRate(0.5), 99, 1, cfg),
               ConfigError);
}

TEST(EstimateScaledL1, PowerLawMatchesExactMoment) {
  const seq::SequenceSpec spec(seq::PowerLawSpec{0.8, 2});
  const auto cfg = config(1000, {10, 100, 1000});
  const auto r = estimate_scaled_l1(spec, math::ScaledRate(0.5), cfg);
  for (std::uint64_t n : cfg.n_grid) {
    const auto* v = r.find("scaled_l1", n);
    const auto* se = r.find("scaled_l1_se", n);
    ASSERT_TRUE(v && se);
    const double exact =
        std::sqrt(static_cast<double>(n)) * static_cast<double>(oracle::power_mean(n, 0.8));
    EXPECT_NEAR(v->value, exact, 4 * se->value) << "n=" << n;
    // Non-negative terms: the triangle bound is an equality.
    EXPECT_DOUBLE_EQ(r.find("scaled_abs_mean", n)->value, v->value);
  }
}

TEST(Determinism, IndependentOfWorkerCount) {
  const seq::SequenceSpec spec(seq::BorelCantelliSpec{});
  auto cfg = config(64, {10, 100, 500});
  const auto ref = to_csv(estimate_scaled_l1(spec, math::ScaledRate(0.3), cfg));
  for (unsigned w : {2u, 3u, 8u}) {
    cfg.workers = w;
    EXPECT_EQ(to_csv(estimate_scaled_l1(spec, math::ScaledRate(0.3), cfg)), ref);
  }
  cfg.seed.value += 1;
  EXPECT_NE(to_csv(estimate_scaled_l1(spec, math::ScaledRate(0.3), cfg)), ref);
}

TEST(PathSup, MonotoneInM) {
  const seq::SequenceSpec spec(seq::BorelCantelliSpec{0.5, 1, 2});
  const auto cfg = config(300, {});
  const std::vector<std::uint64_t> m{10, 100, 1000};
  const auto r =
      path_sup_diagnostic(spec, math::ScaledRate(0.5), m, 2000, 0.5, cfg);
  // The sup over [m, n_cap] shrinks as m grows, path by path.
  EXPECT_GE(r.find("sup_exceed_prob", 10, 0.5)->value,
            r.find("sup_exceed_prob", 100, 0.5)->value);
  EXPECT_GE(r.find("sup_exceed_prob", 100, 0.5)->value,
            r.find("sup_exceed_prob", 1000, 0.5)->value);
  EXPECT_THROW(path_sup_diagnostic(spec, math::ScaledRate(0.5), m, 1000, 0.5, cfg),
               ConfigError);
  EXPECT_THROW(path_sup_diagnostic(spec, math::ScaledRate(0.5), m, 2000, 0, cfg),
               ConfigError);
}

TEST(AuiTail, ExactForBorelCantelli) {
  // n^beta |X_n| = Z_n, so pr(Z_n > x) = n^-(1+a) x^-s for small tails.
  const seq::SequenceSpec spec(seq::BorelCantelliSpec{0.5, 1, 2});
  const auto cfg = config(4000, {2, 4});
  const std::vector<double> x{0.5, 1.0};
  const auto r = aui_tail_diagnostic(spec, math::ScaledRate(0.5), 2, x, cfg);
  for (std::uint64_t n : cfg.n_grid) {
    for (double xx : x) {
      const auto* row = r.find("exceed_prob", n, xx);
      const double p = seq::borel_cantelli_tail(n, 1, 2, xx);
      const double se = std::sqrt(p * (1 - p) / cfg.replications);
      EXPECT_NEAR(row->value, p, 5 * se);
      EXPECT_DOUBLE_EQ(r.find("aui_tail", n, xx)->value,
                       std::pow(static_cast<double>(n), 1.0) * row->value);
    }
  }
  EXPECT_THROW(aui_tail_diagnostic(spec, math::ScaledRate(0.5), 0.5, x, cfg),
               DomainError);
}

TEST(Supermartingale, RatioNearContraction) {
  const seq::SequenceSpec spec(seq::SupermartingaleSpec{0.5, 0.9, 1});
  const auto cfg = config(4000, {5, 50});
  const auto r = supermartingale_condition_check(spec, math::ScaledRate(0.5), cfg);
  for (std::uint64_t n : cfg.n_grid) {
    const double v = r.find("supermart_ratio", n)->value;
    const double se = r.find("supermart_ratio_se", n)->value;
    EXPECT_NEAR(v, 0.9, 4 * se);
  }
  EXPECT_TRUE(r.flags.empty());
}

TEST(Supermartingale, WrongRateRaisesFlag) {
  // Checking a faster rate than the family supports must flag.
  const seq::SequenceSpec spec(seq::SupermartingaleSpec{0.1, 1.0, 1});
  const auto cfg = config(4000, {1, 2});
  const auto r = supermartingale_condition_check(spec, math::ScaledRate(1.0), cfg);
  EXPECT_FALSE(r.flags.empty());
  EXPECT_THROW(supermartingale_condition_check(seq::SequenceSpec(seq::PowerLawSpec{}),
                                               math::ScaledRate(0.5), cfg),
               UnsupportedFamily);
}

TEST(BoundVsEmpirical, RequiresMatchingFamily) {
  const bounds::TailBoundParams p{1, 1, 1, 0.5, 1, 0.75};
  auto q = p;
  q.c2 = 2;
  const auto cfg = config(30, {64});
  const std::vector<double> y{1};
  EXPECT_THROW(bound_vs_empirical(p, seq::SequenceSpec(seq::ExpTailSpec{q}), y, cfg),
               UnsupportedFamily);
  EXPECT_THROW(bound_vs_empirical(p, seq::SequenceSpec(seq::ExpTailSpec{p}),
                                  std::vector<double>{0.5}, cfg),
               ConfigError);
  const auto r = bound_vs_empirical(p, seq::SequenceSpec(seq::ExpTailSpec{p}), y, cfg);
  EXPECT_NE(r.find("analytic_bound", 64, 1.0), nullptr);
  EXPECT_NE(r.find("empirical_exceed", 64, 1.0), nullptr);
}

TEST(CounterexampleSweep, SmallK) {
  const seq::CounterexampleSpec spec{0.4, 0.6, 1};
  const auto cfg = config(2000, {});
  const std::vector<int> k{1, 2, 3};
  const auto r = counterexample_sweep(spec, 1.0, k, cfg);
  // k = 1: X_1 = 1 surely, (2)^0.6 >= 1.
  EXPECT_EQ(r.find("tail_prob", 1, 1.0)->value, 1.0);
  // Block version at k = 1 divides by 2: 2^0.6 / 2 < 1.
  EXPECT_EQ(r.find("block_tail_prob", 1, 1.0)->value, 0.0);
  EXPECT_EQ(r.find("be_margin", 1, 1.0), nullptr);
  EXPECT_NE(r.find("be_margin", 3, 1.0), nullptr);
  // k = 2, scale 4^0.6 = 2.30: (1 + B2 + B3)/3 clears 1 iff B2 + B3 >= 1;
  // the block mean (B2 + B3)/4 needs both.
  const double p = std::pow(2.0, -0.4);
  const double full = 1 - (1 - p) * (1 - p);
  const double block = p * p;
  EXPECT_NEAR(r.find("tail_prob", 3, 1.0)->value, full,
              5 * std::sqrt(full * (1 - full) / 2000));
  EXPECT_NEAR(r.find("block_tail_prob", 3, 1.0)->value, block,
              5 * std::sqrt(block * (1 - block) / 2000));
  EXPECT_THROW(counterexample_sweep(spec, 1.0, std::vector<int>{3, 2}, cfg),
               ConfigError);
  EXPECT_THROW(counterexample_sweep(spec, 1.0, std::vector<int>{63}, cfg),
               ConfigError);
}

}  // namespace
