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

#ifndef CESARO_WILSON_HPP_
#define CESARO_WILSON_HPP_

#include <cmath>
#include <cstdint>

namespace cesaro::mc {

/// Estimated probability with a Wilson score interval.
struct TailEstimate {
  double p_hat = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t replications = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;

  /// Binomial standard error sqrt(p(1-p)/R) at the point estimate.
  double standard_error() const {
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(replications));
  }
};

/// Inverse standard normal CDF.
double normal_quantile(double p);

/// z such that pr(|N(0,1)| <= z) = confidence.
double two_sided_z(double confidence);

TailEstimate wilson_estimate(std::uint64_t successes,
                             std::uint64_t replications, double confidence);

inline double pooled_se(double se_a, double se_b) {
  return std::sqrt(se_a * se_a + se_b * se_b);
}

}  // namespace cesaro::mc

#endif  // CESARO_WILSON_HPP_
