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

#include "cesaro/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "cesaro/errors.hpp"

namespace cesaro::bounds {

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ParamError(field, message);
}

double factorial(int q) {
  double f = 1.0;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

// exp(log_value) clamped to [0, 1].
double clamped_exp(double log_value) {
  if (log_value >= 0.0) return 1.0;
  return std::exp(log_value);
}

void check_integral_domain(int q, double a, double c) {
  if (q < 0) throw DomainError("I_q requires q >= 0");
  if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("I_q requires a >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("I_q requires c > 0");
}

}  // namespace

ValidTailParams validate_params(const TailBoundParams& p) {
  require(std::isfinite(p.c0), "c0", "c0 must be finite");
  require(std::isfinite(p.c1), "c1", "c1 must be finite");
  require(std::isfinite(p.c2), "c2", "c2 must be finite");
  require(std::isfinite(p.beta), "beta", "beta must be finite");
  require(std::isfinite(p.gamma), "gamma", "gamma must be finite");
  require(std::isfinite(p.delta), "delta", "delta must be finite");
  require(p.c0 >= 0.0, "c0", "c0 must be >= 0");
  require(p.c1 > 0.0, "c1", "c1 must be > 0");
  require(p.c2 > 0.0, "c2", "c2 must be > 0");
  require(p.beta > 0.0 && p.beta < 1.0, "beta", "beta must lie in (0, 1)");
  require(p.gamma > 0.0, "gamma", "gamma must be > 0");
  // beta * gamma >= 1 is the failure mode of the ERM-style premise.
  require(p.beta * p.gamma < 1.0, "gamma", "gamma must be < 1/beta");
  require(p.delta > p.beta, "delta", "delta must exceed beta");
  require(p.delta < std::min(1.0 / p.gamma, 1.0), "delta",
          "delta must be < min(1/gamma, 1)");
  return ValidTailParams(p);
}

double alpha_exponent(const ValidTailParams& vp) {
  const auto& p = vp.raw();
  const double num = p.gamma * (1.0 - p.delta);
  return num / (num + (1.0 - p.gamma * p.delta));
}

DerivedConstants derive_constants(const ValidTailParams& vp) {
  const auto& p = vp.raw();
  DerivedConstants d{};
  d.alpha_exp = alpha_exponent(vp);
  d.kappa = vp.kappa();
  d.q = std::max(1, static_cast<int>(std::ceil(d.kappa - 1.0)));
  const double scale = std::max(1.0 / p.c2, std::pow(p.c2, -(d.q + 1)));
  // kappa is the Jacobian of u = k^{1/kappa} y^gamma.
  d.c3 = d.kappa * (d.q + 1) * factorial(d.q) * scale;
  d.c1_prime = p.c1 * d.c3;
  d.c4 = p.c1 * (2.0 * d.c3 + 1.0);
  return d;
}

double premise_tail(const ValidTailParams& vp, std::uint64_t n, double x) {
  if (!(x > 0.0)) throw DomainError("premise_tail requires x > 0");
  if (n < 1) throw DomainError("premise_tail requires n >= 1");
  const auto& p = vp.raw();
  return clamped_exp(std::log(p.c1) -
                     p.c2 * static_cast<double>(n) * std::pow(x, p.gamma));
}

double exp_poly_integral(int q, double a, double c) {
  check_integral_domain(q, a, c);
  // Terms q!/(q-j)! a^{q-j} / c^{j+1} relative to a^q / c.
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < q; ++j) {
    term *= static_cast<double>(q - j) / (a * c);
    sum += term;
  }
  return std::exp(q * std::log(a) - c * a) / c * sum;
}

double exp_poly_integral_bound(int q, double a, double c) {
  check_integral_domain(q, a, c);
  const double scale = std::max(1.0 / c, std::pow(c, -(q + 1)));
  return (q + 1) * factorial(q) * scale * std::exp(q * std::log(a) - c * a);
}

double uniform_tail_bound(const ValidTailParams& vp, std::uint64_t m,
                          double y) {
  if (!(y >= 1.0)) throw DomainError("uniform_tail_bound requires y >= 1");
  if (m < 1) throw DomainError("uniform_tail_bound requires m >= 1");
  const auto& p = vp.raw();
  const auto d = derive_constants(vp);
  const double md = static_cast<double>(m);
  const double exponent = p.c2 * std::pow(md, 1.0 - p.gamma * p.delta) *
                          std::pow(y, p.gamma);
  return clamped_exp(std::log(d.c1_prime) + std::log(md) - exponent);
}

CesaroTailBound cesaro_tail_bound(const ValidTailParams& vp, std::uint64_t n,
                                  double y) {
  if (!(y >= 1.0)) throw DomainError("cesaro_tail_bound requires y >= 1");
  if (n < 1) throw DomainError("cesaro_tail_bound requires n >= 1");
  const auto& p = vp.raw();
  const auto d = derive_constants(vp);
  const double nd = static_cast<double>(n);
  CesaroTailBound out{};
  out.threshold = p.c0 / (1.0 - p.beta) * std::pow(nd, -p.beta) +
                  3.0 / (1.0 - p.delta) * std::pow(nd, -p.delta) * y;
  const double rate = d.alpha_exp * (1.0 - p.gamma * p.delta);
  out.prob_bound =
      clamped_exp(std::log(d.c4) + d.alpha_exp * std::log(nd) -
                  p.c2 * std::pow(nd, rate) * std::pow(y, p.gamma));
  return out;
}

std::uint64_t monotone_from(const ValidTailParams& vp) {
  const auto& p = vp.raw();
  const double one_minus = 1.0 - p.gamma * p.delta;
  const double rate = alpha_exponent(vp) * one_minus;
  // d/d(log n) of the log bound is alpha (1 - c2 (1-gd) n^rate y^gamma).
  const double n0 = std::pow(1.0 / (p.c2 * one_minus), 1.0 / rate);
  if (!(n0 > 1.0)) return 1;
  return static_cast<std::uint64_t>(std::ceil(n0));
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

BerryEsseenTerms berry_esseen_terms(std::uint64_t n, double alpha, double beta,
                                    double M) {
  if (n < 4 || !std::has_single_bit(n)) {
    throw DomainError("berry_esseen_margin requires n = 2^k with k >= 2, got " +
                      std::to_string(n));
  }
  if (!(alpha > 0.0 && alpha < beta && beta < 1.0)) {
    throw DomainError("berry_esseen_margin requires 0 < alpha < beta < 1");
  }
  if (!(M > 0.0)) throw DomainError("berry_esseen_margin requires M > 0");

  const double nd = static_cast<double>(n);
  const double half = nd / 2.0;
  BerryEsseenTerms t{};
  t.p = std::pow(half, -alpha);
  if (!(t.p < 1.0)) throw DomainError("block probability must be < 1");

  const double var = t.p * (1.0 - t.p);
  const double rho = var * ((1.0 - t.p) * (1.0 - t.p) + t.p * t.p);
  t.z = std::sqrt(nd / var) * (2.0 * M * std::pow(nd, -beta) - t.p);
  t.normal_part = normal_cdf(-t.z);
  t.penalty =
      kBerryEsseenConstant * rho / (var * std::sqrt(var) * std::sqrt(half));
  t.margin = std::clamp(t.normal_part - t.penalty, 0.0, 1.0);
  return t;
}

double berry_esseen_margin(std::uint64_t n, double alpha, double beta,
                           double M) {
  return berry_esseen_terms(n, alpha, beta, M).margin;
}

}  // namespace cesaro::bounds
