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

// Deterministic Cesaro arithmetic: running means, scaled running means and
// block means over finite real sequences.

#ifndef CESARO_CORE_MATH_HPP_
#define CESARO_CORE_MATH_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cesaro::math {

/// Exponent beta >= 0 applied as n^beta to a Cesaro mean.
class ScaledRate {
 public:
  explicit ScaledRate(double beta);

  double beta() const noexcept { return beta_; }

  /// n^beta; exactly 1 when beta == 0.
  double factor(double n) const { return std::pow(n, beta_); }

 private:
  double beta_;
};

/// Neumaier-compensated accumulator. Keeps relative error at O(eps) for
/// sums of 1e8 terms, independent of ordering effects that plain summation
/// suffers from.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming Cesaro mean of x_1, x_2, ...; the value after `push` is the
/// mean of everything pushed so far.
class RunningMean {
 public:
  void push(double x) noexcept {
    sum_.add(x);
    ++count_;
  }

  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept {
    return sum_.value() / static_cast<double>(count_);
  }
  double scaled(const ScaledRate& rate) const {
    return rate.factor(static_cast<double>(count_)) * mean();
  }

 private:
  CompensatedSum sum_;
  std::size_t count_ = 0;
};

/// (1/n) * sum of xs. Throws DomainError on an empty or non-finite input.
double cesaro_mean(std::span<const double> xs);

/// The sequence (n^beta * mean(xs[1..n]))_{n=1..len(xs)} in one pass.
std::vector<double> scaled_cesaro(std::span<const double> xs,
                                  const ScaledRate& rate);

/// Mean of xs[n1..n2] with 1-based inclusive indices.
double block_mean(std::span<const double> xs, std::size_t n1, std::size_t n2);

}  // namespace cesaro::math

#endif  // CESARO_CORE_MATH_HPP_
