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

// Seedable random-sequence families: the block-Bernoulli counterexample,
// exact exponential-tail, power-law, multiplicative supermartingale and
// clamped-Pareto (Borel-Cantelli) sequences.
//
// Every family consumes exactly one uniform per index: X_i uses stream
// position i-1. Paths are therefore bitwise reproducible from (seed, n).

#ifndef CESARO_SEQUENCE_MODELS_HPP_
#define CESARO_SEQUENCE_MODELS_HPP_

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cesaro/bounds.hpp"
#include "cesaro/philox.hpp"

namespace cesaro::seq {

enum class Family {
  kCounterexample,
  kPowerLaw,
  kExpTail,
  kSupermartingale,
  kBorelCantelli,
};

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

/// X_n ~ bound_b * Bernoulli((2^floor(log2 n))^-alpha), independent.
struct CounterexampleSpec {
  double alpha = 0.4;
  double beta = 0.6;
  double bound_b = 1.0;

  bool operator==(const CounterexampleSpec&) const = default;
};

/// X_i = i^-r U_i, U_i ~ Uniform[0, spread].
struct PowerLawSpec {
  double r = 0.8;
  double spread = 2.0;

  bool operator==(const PowerLawSpec&) const = default;
};

/// X_i = c0 i^-beta + Exp(rate c2 i). Meets the exponential-tail premise
/// with equality; only gamma = 1, c1 = 1 is supported.
struct ExpTailSpec {
  bounds::TailBoundParams params;

  bool operator==(const ExpTailSpec&) const = default;
};

/// X_1 = x0, X_{n+1} = X_n V_n with V_n ~ Uniform[0, 2 contraction
/// (1+1/n)^-beta].
struct SupermartingaleSpec {
  double beta = 0.5;
  double contraction = 0.9;
  double x0 = 1.0;

  bool operator==(const SupermartingaleSpec&) const = default;
};

/// X_i = i^-beta Z_i with pr(Z_i > x) = min(1, i^-(1+a) x^-s).
struct BorelCantelliSpec {
  double beta = 0.5;
  double a = 1.0;
  double s = 2.0;

  bool operator==(const BorelCantelliSpec&) const = default;
};

void validate(const CounterexampleSpec& spec);
void validate(const PowerLawSpec& spec);
void validate(const ExpTailSpec& spec);
void validate(const SupermartingaleSpec& spec);
void validate(const BorelCantelliSpec& spec);

/// Tagged family description, validated on construction.
class SequenceSpec {
 public:
  using Params = std::variant<CounterexampleSpec, PowerLawSpec, ExpTailSpec,
                              SupermartingaleSpec, BorelCantelliSpec>;

  template <class T>
    requires std::is_constructible_v<Params, T>
  SequenceSpec(T params)  // NOLINT(google-explicit-constructor)
      : params_(std::move(params)) {
    std::visit([](const auto& p) { validate(p); }, params_);
  }

  Family family() const noexcept {
    return static_cast<Family>(params_.index());
  }
  std::string_view name() const { return family_name(family()); }
  const Params& params() const noexcept { return params_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&params_);
  }

  bool operator==(const SequenceSpec&) const = default;

 private:
  Params params_;
};

/// (2^floor(log2 n))^-alpha; constant on each dyadic block [2^k, 2^{k+1}-1].
double block_bernoulli_prob(std::uint64_t n, double alpha);

/// pr(Z_i > x) for the Borel-Cantelli family.
double borel_cantelli_tail(std::uint64_t i, double a, double s, double x);

// -- streaming generators ---------------------------------------------------

class CounterexampleGenerator {
 public:
  CounterexampleGenerator(const CounterexampleSpec& spec, Seed seed)
      : rng_(seed), alpha_(spec.alpha), b_(spec.bound_b) {}

  double next() {
    ++i_;
    if (i_ == next_block_) {
      p_ = block_bernoulli_prob(i_, alpha_);
      next_block_ <<= 1;
    }
    return rng_.next() < p_ ? b_ : 0.0;
  }

 private:
  CounterStream rng_;
  double alpha_;
  double b_;
  std::uint64_t i_ = 0;
  std::uint64_t next_block_ = 1;
  double p_ = 1.0;
};

class PowerLawGenerator {
 public:
  PowerLawGenerator(const PowerLawSpec& spec, Seed seed)
      : rng_(seed), r_(spec.r), spread_(spec.spread) {}

  double next() {
    ++i_;
    const double u = rng_.next();
    return std::pow(static_cast<double>(i_), -r_) * (spread_ * u);
  }

 private:
  CounterStream rng_;
  double r_;
  double spread_;
  std::uint64_t i_ = 0;
};

class ExpTailGenerator {
 public:
  ExpTailGenerator(const ExpTailSpec& spec, Seed seed)
      : rng_(seed),
        c0_(spec.params.c0),
        c2_(spec.params.c2),
        beta_(spec.params.beta) {}

  double next() {
    ++i_;
    const double i = static_cast<double>(i_);
    const double u = rng_.next();
    return c0_ * std::pow(i, -beta_) - std::log1p(-u) / (c2_ * i);
  }

 private:
  CounterStream rng_;
  double c0_;
  double c2_;
  double beta_;
  std::uint64_t i_ = 0;
};

class SupermartingaleGenerator {
 public:
  SupermartingaleGenerator(const SupermartingaleSpec& spec, Seed seed)
      : rng_(seed),
        beta_(spec.beta),
        contraction_(spec.contraction),
        x_(spec.x0) {}

  double next() {
    const double u = rng_.next();
    if (i_ > 0) {
      const double n = static_cast<double>(i_);
      x_ *= 2.0 * contraction_ * std::pow(1.0 + 1.0 / n, -beta_) * u;
    }
    ++i_;
    return x_;
  }

 private:
  CounterStream rng_;
  double beta_;
  double contraction_;
  double x_;
  std::uint64_t i_ = 0;
};

class BorelCantelliGenerator {
 public:
  BorelCantelliGenerator(const BorelCantelliSpec& spec, Seed seed)
      : rng_(seed), beta_(spec.beta), a_(spec.a), s_(spec.s) {}

  double next() {
    ++i_;
    const double i = static_cast<double>(i_);
    const double v = 1.0 - rng_.next();  // (0, 1]
    const double z = std::pow(std::pow(i, -(1.0 + a_)) / v, 1.0 / s_);
    return std::pow(i, -beta_) * z;
  }

 private:
  CounterStream rng_;
  double beta_;
  double a_;
  double s_;
  std::uint64_t i_ = 0;
};

inline CounterexampleGenerator make_generator(const CounterexampleSpec& s,
                                              Seed seed) {
  return {s, seed};
}
inline PowerLawGenerator make_generator(const PowerLawSpec& s, Seed seed) {
  return {s, seed};
}
inline ExpTailGenerator make_generator(const ExpTailSpec& s, Seed seed) {
  return {s, seed};
}
inline SupermartingaleGenerator make_generator(const SupermartingaleSpec& s,
                                               Seed seed) {
  return {s, seed};
}
inline BorelCantelliGenerator make_generator(const BorelCantelliSpec& s,
                                             Seed seed) {
  return {s, seed};
}

/// Dispatches once on the family and hands `f` a concrete generator, so hot
/// loops inside `f` never pay for variant dispatch.
template <class F>
decltype(auto) with_generator(const SequenceSpec& spec, Seed seed, F&& f) {
  return std::visit(
      [&](const auto& params) -> decltype(auto) {
        auto gen = make_generator(params, seed);
        return f(gen);
      },
      spec.params());
}

// -- materialized paths -----------------------------------------------------

std::vector<double> sample_path(const SequenceSpec& spec, std::size_t n,
                                Seed seed);

std::vector<double> sample_counterexample(const CounterexampleSpec& spec,
                                          std::size_t n, Seed seed);
std::vector<double> sample_exp_tail(const bounds::TailBoundParams& params,
                                    std::size_t n_max, Seed seed);
std::vector<double> sample_power_law(double r, double spread,
                                     std::size_t n_max, Seed seed);
std::vector<double> sample_supermartingale(double beta, double contraction,
                                           double x0, std::size_t n_max,
                                           Seed seed);
std::vector<double> sample_borel_cantelli(double beta, double a, double s,
                                          std::size_t n_max, Seed seed);

}  // namespace cesaro::seq

#endif  // CESARO_SEQUENCE_MODELS_HPP_
