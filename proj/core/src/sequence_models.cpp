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

#include "cesaro/sequence_models.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "cesaro/errors.hpp"

namespace cesaro::seq {

namespace {

constexpr std::array<std::string_view, 5> kFamilyNames = {
    "counterexample", "power_law", "exp_tail", "supermartingale",
    "borel_cantelli"};

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ParamError(field, message);
}

bool finite(double x) { return std::isfinite(x); }

template <class Spec>
std::vector<double> materialize(const Spec& spec, std::size_t n, Seed seed) {
  validate(spec);
  auto gen = make_generator(spec, seed);
  std::vector<double> path(n);
  for (auto& x : path) x = gen.next();
  return path;
}

}  // namespace

std::string_view family_name(Family family) {
  return kFamilyNames.at(static_cast<std::size_t>(family));
}

std::optional<Family> parse_family(std::string_view name) {
  const auto it = std::find(kFamilyNames.begin(), kFamilyNames.end(), name);
  if (it == kFamilyNames.end()) return std::nullopt;
  return static_cast<Family>(it - kFamilyNames.begin());
}

void validate(const CounterexampleSpec& s) {
  require(finite(s.alpha) && s.alpha > 0.0 && s.alpha < 1.0, "alpha",
          "alpha must lie in (0, 1)");
  require(finite(s.beta) && s.beta > 0.0 && s.beta < 1.0, "beta",
          "beta must lie in (0, 1)");
  require(s.alpha < s.beta, "alpha", "alpha must be < beta");
  require(finite(s.bound_b) && s.bound_b > 0.0, "bound_b",
          "bound_b must be > 0");
}

void validate(const PowerLawSpec& s) {
  require(finite(s.r) && s.r > 0.0, "r", "r must be > 0");
  require(finite(s.spread) && s.spread >= 0.0, "spread",
          "spread must be >= 0");
}

void validate(const ExpTailSpec& s) {
  bounds::validate_params(s.params);
  if (s.params.gamma != 1.0 || s.params.c1 != 1.0) {
    throw UnsupportedFamily(
        "exp_tail sampling supports only gamma = 1 and c1 = 1");
  }
}

void validate(const SupermartingaleSpec& s) {
  require(finite(s.beta) && s.beta >= 0.0, "beta", "beta must be >= 0");
  require(finite(s.contraction) && s.contraction > 0.0, "contraction",
          "contraction must be > 0");
  if (s.contraction > 1.0) {
    throw DomainError("contraction must be <= 1 for the supermartingale "
                      "condition to hold");
  }
  require(finite(s.x0) && s.x0 >= 0.0, "x0", "x0 must be >= 0");
}

void validate(const BorelCantelliSpec& s) {
  require(finite(s.beta) && s.beta >= 0.0, "beta", "beta must be >= 0");
  require(finite(s.a) && s.a > 0.0, "a", "a must be > 0");
  require(finite(s.s) && s.s > 0.0, "s", "s must be > 0");
}

double block_bernoulli_prob(std::uint64_t n, double alpha) {
  if (n < 1) throw DomainError("block_bernoulli_prob requires n >= 1");
  const int k = std::bit_width(n) - 1;
  return std::pow(std::ldexp(1.0, k), -alpha);
}

double borel_cantelli_tail(std::uint64_t i, double a, double s, double x) {
  if (i < 1) throw DomainError("index must be >= 1");
  if (!(x > 0.0)) return 1.0;
  return std::min(1.0, std::pow(static_cast<double>(i), -(1.0 + a)) *
                           std::pow(x, -s));
}

std::vector<double> sample_path(const SequenceSpec& spec, std::size_t n,
                                Seed seed) {
  return with_generator(spec, seed, [n](auto& gen) {
    std::vector<double> path(n);
    for (auto& x : path) x = gen.next();
    return path;
  });
}

std::vector<double> sample_counterexample(const CounterexampleSpec& spec,
                                          std::size_t n, Seed seed) {
  return materialize(spec, n, seed);
}

std::vector<double> sample_exp_tail(const bounds::TailBoundParams& params,
                                    std::size_t n_max, Seed seed) {
  return materialize(ExpTailSpec{params}, n_max, seed);
}

std::vector<double> sample_power_law(double r, double spread,
                                     std::size_t n_max, Seed seed) {
  return materialize(PowerLawSpec{r, spread}, n_max, seed);
}

std::vector<double> sample_supermartingale(double beta, double contraction,
                                           double x0, std::size_t n_max,
                                           Seed seed) {
  return materialize(SupermartingaleSpec{beta, contraction, x0}, n_max, seed);
}

std::vector<double> sample_borel_cantelli(double beta, double a, double s,
                                          std::size_t n_max, Seed seed) {
  return materialize(BorelCantelliSpec{beta, a, s}, n_max, seed);
}

}  // namespace cesaro::seq
