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

#include "orbitfl/clustering/clustering.h"
#include "orbitfl/constellation/orbit.h"

namespace orbitfl::clustering {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::vector<FeatureVector> seed_plus_plus(
    std::span<const FeatureVector> points, int k, SeededRng &rng) {
  const std::size_t n = points.size();
  std::vector<FeatureVector> centroids;
  centroids.push_back(points[rng.uniform_int(n)]);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], squared_distance(points[i], centroids.back()));
      total += best[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += best[i];
        if (cumulative > target && best[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(n);
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

int nearest(std::span<const double> p, const std::vector<FeatureVector> &cs) {
  int best = 0;
  double best_d = squared_distance(p, cs[0]);
  for (std::size_t c = 1; c < cs.size(); ++c) {
    const double d = squared_distance(p, cs[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

void recompute_centroids(std::span<const FeatureVector> points,
                         const std::vector<int> &labels,
                         std::vector<FeatureVector> &centroids) {
  const std::size_t dim = points.front().size();
  std::vector<int> counts(centroids.size(), 0);
  for (auto &c : centroids) std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto &c = centroids[labels[i]];
    for (std::size_t t = 0; t < dim; ++t) c[t] += points[i][t];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] == 0) continue;
    for (double &x : centroids[c]) x /= counts[c];
  }
}

// Moves points into empty clusters. Returns true if anything moved.
bool repair_empty(std::span<const FeatureVector> points,
                  std::vector<int> &labels,
                  std::vector<FeatureVector> &centroids) {
  bool moved = false;
  const int k = static_cast<int>(centroids.size());
  for (int target = 0; target < k; ++target) {
    std::vector<int> counts(k, 0);
    for (int l : labels) ++counts[l];
    if (counts[target] > 0) continue;
    int donor = -1;
    double donor_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (counts[labels[i]] <= 1) continue;
      const double d = squared_distance(points[i], centroids[labels[i]]);
      if (d > donor_d) {
        donor_d = d;
        donor = static_cast<int>(i);
      }
    }
    if (donor < 0) break;
    labels[donor] = target;
    centroids[target] = points[donor];
    moved = true;
  }
  return moved;
}

}  // namespace

std::vector<int> ClusterAssignment::members(int k) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == k) out.push_back(static_cast<int>(i));
  }
  return out;
}

ClusterAssignment kmeans_cluster(std::span<const FeatureVector> features,
                                 int k, SeededRng &rng, int max_iters) {
  if (k <= 0) throw std::invalid_argument("kmeans_cluster: K must be > 0");
  if (features.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("kmeans_cluster: K exceeds point count");
  }
  for (const auto &f : features) {
    if (f.size() != features.front().size()) {
      throw std::invalid_argument("kmeans_cluster: feature size mismatch");
    }
  }

  ClusterAssignment out;
  out.centroids = seed_plus_plus(features, k, rng);
  out.labels.assign(features.size(), -1);

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < features.size(); ++i) {
      const int l = nearest(features[i], out.centroids);
      if (l != out.labels[i]) {
        out.labels[i] = l;
        changed = true;
      }
    }
    changed |= repair_empty(features, out.labels, out.centroids);
    recompute_centroids(features, out.labels, out.centroids);
    out.iterations = iter + 1;
    if (!changed) break;
  }
  return out;
}

int select_ps(std::span<const int> members, std::span<const Vec3> positions,
              std::span<const double> comp_loads) {
  if (members.empty()) throw std::invalid_argument("select_ps: empty cluster");
  Vec3 mean = {0.0, 0.0, 0.0};
  double scale = 0.0;
  for (int id : members) {
    for (int a = 0; a < 3; ++a) mean[a] += positions[id][a];
    scale = std::max(scale, constellation::norm(positions[id]));
  }
  for (double &x : mean) x /= static_cast<double>(members.size());
  // Distances closer than this are treated as equal so that rounding in
  // the mean cannot decide the election.
  const double tie = 1e-12 * std::max(scale, 1.0);

  int best = members.front();
  double best_d = constellation::distance(positions[best], mean);
  for (std::size_t m = 1; m < members.size(); ++m) {
    const int id = members[m];
    const double d = constellation::distance(positions[id], mean);
    bool better;
    if (std::abs(d - best_d) <= tie) {
      better = comp_loads[id] < comp_loads[best] ||
               (comp_loads[id] == comp_loads[best] && id < best);
    } else {
      better = d < best_d;
    }
    if (better) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

void elect_parameter_servers(ClusterAssignment &assignment,
                             std::span<const Vec3> positions,
                             std::span<const double> comp_loads) {
  assignment.ps_ids.clear();
  for (int k = 0; k < assignment.num_clusters(); ++k) {
    const auto members = assignment.members(k);
    assignment.ps_ids.push_back(select_ps(members, positions, comp_loads));
  }
}

}  // namespace orbitfl::clustering
