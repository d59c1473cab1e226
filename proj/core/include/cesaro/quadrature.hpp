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


// Composite Gauss-Legendre tensor grids on the unit cube [0, 1]^d, d <= 2.

#ifndef CESARO_QUADRATURE_HPP_
#define CESARO_QUADRATURE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cesaro/core_math.hpp"

namespace cesaro::quad {

inline constexpr int kDefaultPointsD1 = 4096;
inline constexpr int kDefaultPointsD2 = 256;

using Point = std::span<const double>;
using Field = std::function<double(Point)>;

int default_points_per_axis(int dim);

/// 4-point Gauss-Legendre on points_per_axis / 4 equal panels per axis.
class TensorGrid {
 public:
  /// points_per_axis = 0 selects the default for `dim`. Throws
  /// std::invalid_argument unless dim is 1 or 2 and points_per_axis is a
  /// positive multiple of 4.
  explicit TensorGrid(int dim, int points_per_axis = 0);

  int dim() const noexcept { return dim_; }
  int points_per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return weights_.size(); }

  Point point(std::size_t k) const {
    return {coords_.data() + k * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> weights() const noexcept { return weights_; }

  std::vector<double> evaluate(const Field& f) const;

  /// sum_k w_k values[k], compensated.
  double integrate_values(std::span<const double> values) const;

  template <class F>
  double integrate(F&& f) const {
    math::CompensatedSum sum;
    for (std::size_t k = 0; k < size(); ++k) sum.add(weights_[k] * f(point(k)));
    return sum.value();
  }

 private:
  int dim_;
  int per_axis_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

}  // namespace cesaro::quad

#endif  // CESARO_QUADRATURE_HPP_
