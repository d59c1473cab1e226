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

#include "cesaro/wilson.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <numbers>

#include "cesaro/errors.hpp"

namespace cesaro::mc {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile requires p in (0, 1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double two_sided_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  return normal_quantile(0.5 + confidence / 2.0);
}

TailEstimate wilson_estimate(std::uint64_t successes,
                             std::uint64_t replications, double confidence) {
  if (replications == 0) throw DomainError("wilson_estimate needs R >= 1");
  if (successes > replications) {
    throw DomainError("successes exceed replications");
  }
  const double n = static_cast<double>(replications);
  const double z = two_sided_z(confidence);
  const double z2 = z * z;

  TailEstimate est;
  est.successes = successes;
  est.replications = replications;
  est.p_hat = static_cast<double>(successes) / n;

  const double p = est.p_hat;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  est.ci_low = successes == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  est.ci_high =
      successes == replications ? 1.0 : std::clamp(center + half, p, 1.0);
  return est;
}

}  // namespace cesaro::mc
