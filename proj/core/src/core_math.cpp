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

#include "cesaro/core_math.hpp"

#include <string>

#include "cesaro/errors.hpp"

namespace cesaro::math {

namespace {

void require_finite(double x, std::size_t index) {
  if (!std::isfinite(x)) {
    throw DomainError("non-finite entry at index " + std::to_string(index + 1));
  }
}

}  // namespace

ScaledRate::ScaledRate(double beta) : beta_(beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw DomainError("scaling exponent beta must be finite and >= 0");
  }
}

double cesaro_mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("cesaro_mean of an empty sequence");
  RunningMean acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_finite(xs[i], i);
    acc.push(xs[i]);
  }
  return acc.mean();
}

std::vector<double> scaled_cesaro(std::span<const double> xs,
                                  const ScaledRate& rate) {
  if (xs.empty()) throw DomainError("scaled_cesaro of an empty sequence");
  std::vector<double> out;
  out.reserve(xs.size());
  RunningMean acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_finite(xs[i], i);
    acc.push(xs[i]);
    out.push_back(acc.scaled(rate));
  }
  return out;
}

double block_mean(std::span<const double> xs, std::size_t n1, std::size_t n2) {
  if (n1 < 1 || n1 > n2 || n2 > xs.size()) {
    throw DomainError("block [" + std::to_string(n1) + ", " +
                      std::to_string(n2) + "] outside 1.." +
                      std::to_string(xs.size()));
  }
  return cesaro_mean(xs.subspan(n1 - 1, n2 - n1 + 1));
}

}  // namespace cesaro::math
