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


#include "cesaro/quadrature.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace cesaro::quad {

namespace {

constexpr std::array<double, 4> kNodes = {
    -0.8611363115940525752, -0.3399810435848562648, 0.3399810435848562648,
    0.8611363115940525752};
constexpr std::array<double, 4> kWeights = {
    0.3478548451374538574, 0.6521451548625461426, 0.6521451548625461426,
    0.3478548451374538574};

}  // namespace

int default_points_per_axis(int dim) {
  return dim == 1 ? kDefaultPointsD1 : kDefaultPointsD2;
}

TensorGrid::TensorGrid(int dim, int points_per_axis)
    : dim_(dim),
      per_axis_(points_per_axis == 0 ? default_points_per_axis(dim)
                                     : points_per_axis) {
  if (dim_ != 1 && dim_ != 2) {
    throw std::invalid_argument("quadrature dimension must be 1 or 2, got " +
                                std::to_string(dim_));
  }
  if (per_axis_ <= 0 || per_axis_ % 4 != 0) {
    throw std::invalid_argument(
        "points per axis must be a positive multiple of 4");
  }

  const int panels = per_axis_ / 4;
  const double h = 1.0 / panels;
  std::vector<double> x(per_axis_);
  std::vector<double> w(per_axis_);
  for (int p = 0; p < panels; ++p) {
    for (int j = 0; j < 4; ++j) {
      x[4 * p + j] = (p + 0.5 * (1.0 + kNodes[j])) * h;
      w[4 * p + j] = 0.5 * h * kWeights[j];
    }
  }

  if (dim_ == 1) {
    coords_ = std::move(x);
    weights_ = std::move(w);
    return;
  }
  const auto n = static_cast<std::size_t>(per_axis_);
  coords_.reserve(2 * n * n);
  weights_.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      coords_.push_back(x[a]);
      coords_.push_back(x[b]);
      weights_.push_back(w[a] * w[b]);
    }
  }
}

std::vector<double> TensorGrid::evaluate(const Field& f) const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = f(point(k));
  return out;
}

double TensorGrid::integrate_values(std::span<const double> values) const {
  if (values.size() != size()) {
    throw std::invalid_argument("value count does not match the grid");
  }
  math::CompensatedSum sum;
  for (std::size_t k = 0; k < size(); ++k) sum.add(weights_[k] * values[k]);
  return sum.value();
}

}  // namespace cesaro::quad
