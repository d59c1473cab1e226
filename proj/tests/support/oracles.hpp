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


// Reference computations used as independent test oracles. They share no
// code with the library beyond the public types.

#ifndef CESARO_TESTS_ORACLES_HPP_
#define CESARO_TESTS_ORACLES_HPP_

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <span>

namespace oracle {

/// Mean accumulated in long double, pairwise.
inline long double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    long double s = 0.0L;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t h = xs.size() / 2;
  return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
}

inline long double mean(std::span<const double> xs) {
  return pairwise_sum(xs) / static_cast<long double>(xs.size());
}

/// int_a^inf e^{-cu} u^q du by adaptive exp-sinh quadrature.
inline double exp_poly_quadrature(int q, double a, double c) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [=](double t) {
    const double u = a + t;
    if (!std::isfinite(u)) return 0.0;
    return std::exp(-c * u + q * std::log(u));
  };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

/// Success probability of index i in the dyadic counterexample:
/// (2^k)^-alpha on [2^k, 2^{k+1} - 1], computed from scratch.
inline long double dyadic_prob(std::uint64_t i, double alpha) {
  int k = 0;
  while ((std::uint64_t{1} << (k + 1)) <= i) ++k;
  return std::pow(2.0L, -static_cast<long double>(alpha) * k);
}

/// E Xbar_n for the counterexample, block by block.
inline long double counterexample_mean(std::uint64_t n, double alpha,
                                       double b) {
  long double s = 0.0L;
  for (std::uint64_t lo = 1; lo <= n; lo <<= 1) {
    const std::uint64_t hi = std::min(n, 2 * lo - 1);
    s += static_cast<long double>(hi - lo + 1) * dyadic_prob(lo, alpha);
  }
  return b * s / static_cast<long double>(n);
}

/// (1/n) sum_{i<=n} i^-r.
inline long double power_mean(std::uint64_t n, double r) {
  long double s = 0.0L;
  for (std::uint64_t i = n; i >= 1; --i) {
    s += std::pow(static_cast<long double>(i), -static_cast<long double>(r));
  }
  return s / static_cast<long double>(n);
}

/// Wilson score interval in long double.
struct Interval {
  long double low;
  long double high;
};
inline Interval wilson(std::uint64_t s, std::uint64_t n, long double z) {
  const long double nn = n;
  const long double p = s / nn;
  const long double z2 = z * z;
  const long double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const long double half =
      z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {centre - half, centre + half};
}

}  // namespace oracle

#endif  // CESARO_TESTS_ORACLES_HPP_
