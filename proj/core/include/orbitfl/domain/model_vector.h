// Copyright 2026 The orbitfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace orbitfl {

/*! Flat parameter or update vector.
 *
 * The same type carries model parameters, local models and model deltas.
 * Its length is fixed per experiment to the substrate's parameter count.
 */
class ModelVector {
 public:
  ModelVector() = default;
  explicit ModelVector(std::size_t dim, double fill = 0.0)
      : values_(dim, fill) {}
  ModelVector(std::initializer_list<double> values) : values_(values) {}
  explicit ModelVector(std::vector<double> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const std::vector<double> &values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const ModelVector &) const = default;

 private:
  std::vector<double> values_;
};

//! y += a * x. Sizes must match.
void axpy(double a, const ModelVector &x, ModelVector &y);

//! a - b, element-wise.
ModelVector difference(const ModelVector &a, const ModelVector &b);

double dot(const ModelVector &a, const ModelVector &b);
double l2_norm(const ModelVector &v);
double max_abs(const ModelVector &v);

//! True when every entry is finite.
bool all_finite(const ModelVector &v);

}  // namespace orbitfl
