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

#include <span>
#include <vector>

#include "orbitfl/domain/rng.h"
#include "orbitfl/domain/types.h"

namespace orbitfl::clustering {

//! Dense row-major square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double &operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  bool operator==(const SquareMatrix &) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SimilarityMatrices {
  SquareMatrix h_cos;
  SquareMatrix h_geo;
};

using FeatureVector = std::vector<double>;

//! Partition of clients plus the elected parameter server of each cluster.
struct ClusterAssignment {
  std::vector<int> labels;     // per client, in [0, K)
  std::vector<int> ps_ids;     // per cluster
  std::vector<FeatureVector> centroids;
  int iterations = 0;

  int num_clusters() const { return static_cast<int>(centroids.size()); }
  //! Member ids of cluster k, ascending.
  std::vector<int> members(int k) const;
};

/*! Data similarity (1 + cos(u_i, u_j)) / 2 between client updates.
 *
 * Throws std::invalid_argument naming the client when an update has zero
 * norm, or when dimensions disagree.
 */
SquareMatrix gradient_similarity(std::span<const ModelVector> updates);

/*! Spatial similarity 1 - (R - R_min) / (R_max - R_min), with R_min and
 * R_max taken over off-diagonal pairs. The diagonal is 1. When every
 * position coincides the result is all ones.
 */
SquareMatrix geo_similarity(std::span<const Vec3> positions);

//! z_i = [theta * row_i(h_cos) || (1 - theta) * row_i(h_geo)].
std::vector<FeatureVector> joint_features(const SquareMatrix &h_cos,
                                          const SquareMatrix &h_geo,
                                          double theta);

/*! Lloyd's algorithm with k-means++ seeding.
 *
 * Stops when no label changes or after max_iters passes. An empty cluster
 * takes the point farthest from its current centroid among clusters that
 * have more than one member. Distance ties go to the lower centroid index.
 * ps_ids is left empty; see elect_parameter_servers.
 */
ClusterAssignment kmeans_cluster(std::span<const FeatureVector> features,
                                 int k, SeededRng &rng, int max_iters = 100);

/*! Picks the member nearest the members' mean position. Ties go to the
 * smaller comp load (the idlest), then to the smaller id. positions and
 * comp_loads are indexed by client id.
 */
int select_ps(std::span<const int> members, std::span<const Vec3> positions,
              std::span<const double> comp_loads);

//! Fills assignment.ps_ids with select_ps for every cluster.
void elect_parameter_servers(ClusterAssignment &assignment,
                             std::span<const Vec3> positions,
                             std::span<const double> comp_loads);

}  // namespace orbitfl::clustering
