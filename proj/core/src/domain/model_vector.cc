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
#include "orbitfl/domain/model_vector.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitfl {

namespace {
void require_same_size(const ModelVector &a, const ModelVector &b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("model vector dimension mismatch");
  }
}
}  // namespace

void axpy(double a, const ModelVector &x, ModelVector &y) {
  require_same_size(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

ModelVector difference(const ModelVector &a, const ModelVector &b) {
  require_same_size(a, b);
  ModelVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

double dot(const ModelVector &a, const ModelVector &b) {
  require_same_size(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(const ModelVector &v) { return std::sqrt(dot(v, v)); }

double max_abs(const ModelVector &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const ModelVector &v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace orbitfl
