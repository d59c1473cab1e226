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

// Closed-form analytic bounds: exponential-tail premise and its Cesaro-mean
// propagation, the uniform-over-k tail bound, the exponential-polynomial
// integral I_q(a, c), the normal CDF and the Berry-Esseen survival margin of
// the block-Bernoulli counterexample.

#ifndef CESARO_BOUNDS_HPP_
#define CESARO_BOUNDS_HPP_

#include <cstdint>

namespace cesaro::bounds {

/// Constants of the premise
///   pr(X_n >= c0 n^-beta + x) <= c1 exp(-c2 n x^gamma)
/// together with the averaging exponent delta.
struct TailBoundParams {
  double c0 = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double beta = 0.5;
  double gamma = 1.0;
  double delta = 0.75;

  bool operator==(const TailBoundParams&) const = default;
};

/// A TailBoundParams that passed validate_params(); the only way to reach
/// the bound evaluators.
class ValidTailParams {
 public:
  const TailBoundParams& raw() const noexcept { return p_; }
  double kappa() const noexcept { return 1.0 / (1.0 - p_.gamma * p_.delta); }

 private:
  friend ValidTailParams validate_params(const TailBoundParams& p);
  explicit ValidTailParams(const TailBoundParams& p) : p_(p) {}
  TailBoundParams p_;
};

/// Checks every inequality of the premise window; throws ParamError naming
/// the first violated one. beta*gamma >= 1 is reported as
/// "gamma must be < 1/beta".
ValidTailParams validate_params(const TailBoundParams& p);

struct DerivedConstants {
  double alpha_exp;
  double kappa;
  /// ceil(kappa - 1), floored at 1; the integer power in the I_q bound.
  int q;
  double c3;
  double c1_prime;
  double c4;
};

DerivedConstants derive_constants(const ValidTailParams& p);

/// gamma(1-delta) / {gamma(1-delta) + (1-gamma delta)}.
double alpha_exponent(const ValidTailParams& p);

/// min(1, c1 exp(-c2 n x^gamma)); x must be > 0.
double premise_tail(const ValidTailParams& p, std::uint64_t n, double x);

/// I_q(a, c) = integral_a^inf exp(-cu) u^q du in closed form,
///   exp(-ca) sum_{j=0..q} q!/(q-j)! a^{q-j} / c^{j+1}.
/// Requires a >= 1 and c > 0.
double exp_poly_integral(int q, double a, double c);

/// (q+1) q! max{1/c, c^-(q+1)} a^q exp(-ca), an upper bound on I_q(a, c)
/// for a >= 1: the closed form has q+1 terms, each at most
/// q! max{..} a^q exp(-ca).
double exp_poly_integral_bound(int q, double a, double c);

/// min(1, C1' m exp(-c2 m^{1-gamma delta} y^gamma)): bounds
/// pr(exists k >= m+1 : X_k >= c0 k^-beta + k^-delta y). Requires y >= 1.
double uniform_tail_bound(const ValidTailParams& p, std::uint64_t m, double y);

struct CesaroTailBound {
  double threshold;
  double prob_bound;
};

/// Threshold c0/(1-beta) n^-beta + 3/(1-delta) n^-delta y for the Cesaro
/// mean and min(1, C4 n^alpha exp(-c2 n^{alpha(1-gamma delta)} y^gamma)).
CesaroTailBound cesaro_tail_bound(const ValidTailParams& p, std::uint64_t n,
                                  double y);

/// Smallest n from which cesaro_tail_bound(p, n, y).prob_bound is
/// non-increasing in n for every y >= 1.
std::uint64_t monotone_from(const ValidTailParams& p);

/// Standard normal CDF.
double normal_cdf(double z);

inline constexpr double kBerryEsseenConstant = 0.4748;

struct BerryEsseenTerms {
  double p;
  double z;
  double normal_part;  // 1 - Phi(z)
  double penalty;      // C_BE rho / (sigma^3 sqrt(n/2))
  double margin;       // clamp(normal_part - penalty, 0, 1)
};

/// Lower bound on pr(mean of X_{n/2..n-1} >= 2 n^-beta M) for the
/// counterexample with block probability p = (n/2)^-alpha. n must be a power
/// of two >= 4 and 0 < alpha < beta < 1.
BerryEsseenTerms berry_esseen_terms(std::uint64_t n, double alpha, double beta,
                                    double M);

double berry_esseen_margin(std::uint64_t n, double alpha, double beta,
                           double M);

}  // namespace cesaro::bounds

#endif  // CESARO_BOUNDS_HPP_
