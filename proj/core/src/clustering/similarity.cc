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
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "orbitfl/clustering/clustering.h"
#include "orbitfl/constellation/orbit.h"

namespace orbitfl::clustering {

namespace {

// Rescale by a power of two so the largest magnitude lies in [0.5, 1).
// The scaling is exact, which makes the cosine below invariant to any
// power-of-two rescaling of the inputs and well conditioned otherwise.
std::vector<double> power_of_two_normalized(const ModelVector &v) {
  const double m = max_abs(v);
  int exponent = 0;
  std::frexp(m, &exponent);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::ldexp(v[i], -exponent);
  }
  return out;
}

}  // namespace

SquareMatrix gradient_similarity(std::span<const ModelVector> updates) {
  const std::size_t n = updates.size();
  std::vector<std::vector<double>> scaled;
  std::vector<double> norms;
  scaled.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && updates[i].size() != updates[0].size()) {
      throw std::invalid_argument(
          "gradient_similarity: dimension mismatch at client " +
          std::to_string(i));
    }
    if (max_abs(updates[i]) == 0.0) {
      throw std::invalid_argument(
          "gradient_similarity: zero-norm update from client " +
          std::to_string(i));
    }
    scaled.push_back(power_of_two_normalized(updates[i]));
    double sq = 0.0;
    for (double x : scaled.back()) sq += x * x;
    norms.push_back(std::sqrt(sq));
  }

  SquareMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t t = 0; t < scaled[i].size(); ++t) {
        d += scaled[i][t] * scaled[j][t];
      }
      const double cos = std::clamp(d / (norms[i] * norms[j]), -1.0, 1.0);
      h(i, j) = h(j, i) = (1.0 + cos) / 2.0;
    }
  }
  return h;
}

SquareMatrix geo_similarity(std::span<const Vec3> positions) {
  const std::size_t n = positions.size();
  SquareMatrix r(n);
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = constellation::distance(positions[i], positions[j]);
      r(i, j) = r(j, i) = d;
      r_min = std::min(r_min, d);
      r_max = std::max(r_max, d);
    }
  }
  SquareMatrix h(n, 1.0);
  if (n < 2 || !(r_max > r_min)) return h;
  const double span = r_max - r_min;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = h(j, i) = 1.0 - (r(i, j) - r_min) / span;
    }
  }
  return h;
}

std::vector<FeatureVector> joint_features(const SquareMatrix &h_cos,
                                          const SquareMatrix &h_geo,
                                          double theta) {
  if (h_cos.size() != h_geo.size()) {
    throw std::invalid_argument("joint_features: matrix size mismatch");
  }
  const std::size_t n = h_cos.size();
  std::vector<FeatureVector> z(n, FeatureVector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      z[i][j] = theta * h_cos(i, j);
      z[i][n + j] = (1.0 - theta) * h_geo(i, j);
    }
  }
  return z;
}

}  // namespace orbitfl::clustering
