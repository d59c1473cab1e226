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


#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "cesaro/bounds.hpp"
#include "cesaro/mc_engine.hpp"
#include "cesaro/online_estimators.hpp"
#include "cesaro/philox.hpp"
#include "cesaro/sequence_models.hpp"

namespace {

using namespace cesaro;

void BM_PhiloxSequential(benchmark::State& state) {
  CounterStream s(Seed{42, 7});
  double acc = 0;
  for (auto _ : state) acc += s.next();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxSequential);

void BM_PhiloxRandomAccess(benchmark::State& state) {
  const CounterStream s(Seed{42, 7});
  std::uint64_t pos = 0;
  double acc = 0;
  for (auto _ : state) {
    acc += s.uniform_at(pos);
    pos += 1'000'003;
  }
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxRandomAccess);

// One Cesaro path of length n, per family.
template <class Spec>
void BM_SamplePath(benchmark::State& state) {
  const seq::SequenceSpec spec(Spec{});
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) {
    auto path = seq::sample_path(spec, n, Seed{1, r++});
    benchmark::DoNotOptimize(path.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_TEMPLATE(BM_SamplePath, seq::CounterexampleSpec)->Range(1 << 10, 1 << 16);
BENCHMARK_TEMPLATE(BM_SamplePath, seq::PowerLawSpec)->Range(1 << 10, 1 << 16);
BENCHMARK_TEMPLATE(BM_SamplePath, seq::BorelCantelliSpec)->Range(1 << 10, 1 << 16);

void BM_ScaledL1(benchmark::State& state) {
  const seq::SequenceSpec spec(seq::PowerLawSpec{});
  mc::MonteCarloConfig cfg;
  cfg.replications = 64;
  cfg.n_grid = {100, 1000, 10000};
  cfg.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto r = mc::estimate_scaled_l1(spec, math::ScaledRate(0.5), cfg);
    benchmark::DoNotOptimize(r.rows.data());
  }
}
BENCHMARK(BM_ScaledL1)->Arg(1)->Arg(4)->UseRealTime();

void BM_CesaroTailBound(benchmark::State& state) {
  const auto vp = bounds::validate_params({1, 1, 1, 0.5, 1, 0.75});
  std::uint64_t n = 64;
  double acc = 0;
  for (auto _ : state) {
    acc += bounds::cesaro_tail_bound(vp, n, 2.0).prob_bound;
    n = n < (1u << 20) ? n * 2 : 64;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_CesaroTailBound);

void BM_BerryEsseenMargin(benchmark::State& state) {
  double acc = 0;
  for (auto _ : state) acc += bounds::berry_esseen_margin(1u << 16, 0.4, 0.6, 1.0);
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BerryEsseenMargin);

void BM_BayesRiskRun(benchmark::State& state) {
  const online::BayesRiskPlan plan(online::BayesRiskDGP::sine(1), {});
  std::uint64_t r = 0;
  for (auto _ : state) {
    auto d = online::run_bayes_risk(plan, static_cast<std::uint64_t>(state.range(0)),
                                    Seed{3, r++});
    benchmark::DoNotOptimize(d.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BayesRiskRun)->Arg(1 << 12)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
