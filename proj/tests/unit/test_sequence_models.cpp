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

#include <cmath>
#include <vector>

#include "cesaro/errors.hpp"
#include "cesaro/sequence_models.hpp"

namespace {

using namespace cesaro::seq;
using cesaro::Seed;

// |p_hat - p| within 5 binomial SE.
void expect_prob(double hits, double trials, double p, const char* what) {
  const double se = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(hits / trials, p, 5 * se + 1e-12) << what;
}

TEST(FamilyNames, RoundTrip) {
  for (auto f : {Family::kCounterexample, Family::kPowerLaw, Family::kExpTail,
                 Family::kSupermartingale, Family::kBorelCantelli}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_FALSE(parse_family("cauchy").has_value());
}

TEST(SequenceSpec, ValidatesOnConstruction) {
  EXPECT_THROW(SequenceSpec(CounterexampleSpec{0.6, 0.4, 1}), cesaro::ParamError);
  EXPECT_THROW(SequenceSpec(PowerLawSpec{0.8, -1}), cesaro::ParamError);
  EXPECT_THROW(SequenceSpec(SupermartingaleSpec{0.5, 1.1, 1}), cesaro::DomainError);
  ExpTailSpec et;
  et.params.gamma = 0.9;
  EXPECT_THROW(SequenceSpec{et}, cesaro::UnsupportedFamily);
  et.params.gamma = 1.0;
  et.params.delta = 0.4;
  EXPECT_THROW(SequenceSpec{et}, cesaro::ParamError);
  try {
    SequenceSpec(BorelCantelliSpec{0.5, -1, 2});
    FAIL();
  } catch (const cesaro::ParamError& e) {
    EXPECT_EQ(e.field(), "a");
  }
}

TEST(SequenceSpec, Accessors) {
  const SequenceSpec s(PowerLawSpec{0.7, 3});
  EXPECT_EQ(s.family(), Family::kPowerLaw);
  EXPECT_EQ(s.name(), "power_law");
  ASSERT_NE(s.get_if<PowerLawSpec>(), nullptr);
  EXPECT_EQ(s.get_if<PowerLawSpec>()->spread, 3);
  EXPECT_EQ(s.get_if<ExpTailSpec>(), nullptr);
  EXPECT_EQ(s, SequenceSpec(PowerLawSpec{0.7, 3}));
  EXPECT_NE(s, SequenceSpec(PowerLawSpec{0.7, 2}));
}

TEST(BlockBernoulliProb, DyadicBlocks) {
  EXPECT_EQ(block_bernoulli_prob(1, 0.4), 1.0);
  EXPECT_DOUBLE_EQ(block_bernoulli_prob(2, 0.4), std::pow(2.0, -0.4));
  EXPECT_DOUBLE_EQ(block_bernoulli_prob(3, 0.4), std::pow(2.0, -0.4));
  EXPECT_DOUBLE_EQ(block_bernoulli_prob(4, 0.4), std::pow(4.0, -0.4));
  EXPECT_DOUBLE_EQ(block_bernoulli_prob((1u << 20) - 1, 0.5), std::pow(2.0, -9.5));
  EXPECT_THROW(block_bernoulli_prob(0, 0.4), cesaro::DomainError);
}

TEST(Paths, DeterministicAndStreamSeparated) {
  const SequenceSpec s(CounterexampleSpec{});
  EXPECT_EQ(sample_path(s, 500, Seed{9, 1}), sample_path(s, 500, Seed{9, 1}));
  EXPECT_NE(sample_path(s, 500, Seed{9, 1}), sample_path(s, 500, Seed{9, 2}));
  EXPECT_EQ(sample_path(s, 300, Seed{9, 1}),
            sample_counterexample(CounterexampleSpec{}, 300, Seed{9, 1}));
}

TEST(Paths, SampleHelpersValidate) {
  EXPECT_THROW(sample_power_law(-1, 1, 10, Seed{}), cesaro::ParamError);
  EXPECT_THROW(sample_supermartingale(0.5, 2.0, 1, 10, Seed{}),
               cesaro::DomainError);
  EXPECT_EQ(sample_borel_cantelli(0.5, 1, 2, 10, Seed{}).size(), 10u);
}

TEST(Counterexample, BlockFrequencies) {
  const CounterexampleSpec spec{0.4, 0.6, 2.0};
  const int reps = 4000;
  std::vector<double> hits(16, 0.0);
  for (int r = 0; r < reps; ++r) {
    auto gen = make_generator(spec, Seed{1, static_cast<std::uint64_t>(r)});
    for (int i = 1; i <= 15; ++i) {
      const double x = gen.next();
      ASSERT_TRUE(x == 0.0 || x == 2.0);
      hits[i] += x / 2.0;
    }
  }
  for (int i : {1, 2, 5, 12}) {
    int k = 0;
    while ((1 << (k + 1)) <= i) ++k;
    expect_prob(hits[i], reps, std::pow(2.0, -0.4 * k), "index");
  }
}

TEST(PowerLaw, SupportAndMean) {
  const auto path = sample_power_law(0.8, 2.0, 20000, Seed{4, 0});
  double s = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double scale = std::pow(static_cast<double>(i + 1), -0.8);
    ASSERT_GE(path[i], 0.0);
    ASSERT_LE(path[i], 2.0 * scale);
    s += path[i] / scale;
  }
  EXPECT_NEAR(s / path.size(), 1.0, 5 * std::sqrt(4.0 / 12 / path.size()));
}

TEST(ExpTail, ExcessIsExponential) {
  cesaro::bounds::TailBoundParams p{0.5, 1, 2, 0.5, 1, 0.75};
  const int reps = 20000;
  const double x = 0.1;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    const auto path = sample_exp_tail(p, 3, Seed{8, static_cast<std::uint64_t>(r)});
    const double drift = 0.5 * std::pow(3.0, -0.5);
    ASSERT_GE(path[2], drift);
    hits += path[2] - drift > x;
  }
  expect_prob(hits, reps, std::exp(-2.0 * 3 * x), "exp tail at i=3");
}

TEST(Supermartingale, StartAndContraction) {
  const SupermartingaleSpec spec{0.5, 0.9, 3.0};
  const int reps = 40000;
  const int n = 4;
  double num = 0;
  double den = 0;
  for (int r = 0; r < reps; ++r) {
    auto gen = make_generator(spec, Seed{2, static_cast<std::uint64_t>(r)});
    const double x1 = gen.next();
    ASSERT_EQ(x1, 3.0);
    double xn = x1;
    for (int i = 2; i <= n; ++i) xn = gen.next();
    const double next = gen.next();
    num += next / xn;
    den += 1;
  }
  // E[X_{n+1} / X_n] = contraction (1 + 1/n)^-beta.
  const double expect = 0.9 * std::pow(1.25, -0.5);
  EXPECT_NEAR(num / den, expect, 5 * expect / std::sqrt(3.0 * reps));
}

TEST(BorelCantelli, TailMatchesClosedForm) {
  const BorelCantelliSpec spec{0.5, 1.0, 2.0};
  const int reps = 20000;
  for (std::uint64_t i : {1, 3, 10}) {
    const double x = 0.2;
    int hits = 0;
    for (int r = 0; r < reps; ++r) {
      auto gen = make_generator(spec, Seed{3, static_cast<std::uint64_t>(r)});
      double v = 0;
      for (std::uint64_t k = 1; k <= i; ++k) v = gen.next();
      const double z = v * std::pow(static_cast<double>(i), 0.5);
      hits += z > x;
    }
    expect_prob(hits, reps, borel_cantelli_tail(i, 1.0, 2.0, x), "bc tail");
  }
  EXPECT_EQ(borel_cantelli_tail(1, 1.0, 2.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(borel_cantelli_tail(2, 1.0, 2.0, 1.0), 0.25);
}

}  // namespace
