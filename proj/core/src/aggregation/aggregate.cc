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
#include "orbitfl/aggregation/aggregate.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace orbitfl::aggregation {

int staleness(int round, std::optional<int> last_participation_round) {
  if (!last_participation_round) return 1;
  return std::max(1, round - *last_participation_round);
}

double staleness_weight(int phi) { return 1.0 / std::max(1, phi); }

ParticipantSet select_participants(int round, int cluster,
                                   std::span<const Completion> finished,
                                   double epsilon, int cluster_size,
                                   std::span<const std::vector<double>> history) {
  ParticipantSet out;
  out.round = round;
  out.cluster = cluster;
  if (finished.empty()) return out;

  std::vector<Completion> order(finished.begin(), finished.end());
  std::sort(order.begin(), order.end(), [](const Completion &a, const Completion &b) {
    return a.time_s < b.time_s || (a.time_s == b.time_s && a.client_id < b.client_id);
  });
  const auto quota = static_cast<std::size_t>(
      std::max(1.0, std::floor(epsilon * static_cast<double>(cluster_size))));
  const std::size_t n = std::min(quota, order.size());
  for (std::size_t i = 0; i < n; ++i) out.client_ids.push_back(order[i].client_id);
  std::sort(out.client_ids.begin(), out.client_ids.end());

  std::vector<double> pooled;
  for (const auto &past : history) pooled.insert(pooled.end(), past.begin(), past.end());
  for (const auto &c : finished) pooled.push_back(c.time_s);
  std::sort(pooled.begin(), pooled.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(epsilon * static_cast<double>(pooled.size())));
  const double quantile = pooled[std::clamp<std::size_t>(rank, 1, pooled.size()) - 1];
  out.threshold_s = std::max(quantile, order[n - 1].time_s);
  return out;
}

std::vector<double> aggregation_weights(std::span<const Contribution> parts,
                                        bool normalize) {
  double total = 0.0;
  for (const auto &p : parts) total += p.data_size;
  if (!(total > 0.0)) throw std::invalid_argument("aggregation: zero total data");
  std::vector<double> w;
  w.reserve(parts.size());
  for (const auto &p : parts) {
    w.push_back((p.data_size / total) * staleness_weight(p.staleness));
  }
  if (normalize) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double &x : w) x /= sum;
  }
  return w;
}

ModelVector aggregate_delta(std::span<const Contribution> parts, bool normalize) {
  if (parts.empty()) throw std::invalid_argument("aggregate_delta: no participants");
  std::vector<Contribution> sorted(parts.begin(), parts.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Contribution &a, const Contribution &b) {
              return a.client_id < b.client_id;
            });
  const auto weights = aggregation_weights(sorted, normalize);
  const std::size_t dim = sorted.front().update->size();
  ModelVector delta(dim);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].update->size() != dim) {
      throw std::invalid_argument("aggregate_delta: update size mismatch");
    }
    axpy(weights[i], *sorted[i].update, delta);
  }
  return delta;
}

ModelVector intra_cluster_aggregate(const ModelVector &w,
                                    std::span<const Contribution> parts,
                                    bool normalize) {
  ModelVector out = w;
  const ModelVector delta = aggregate_delta(parts, normalize);
  if (delta.size() != w.size()) {
    throw std::invalid_argument("intra_cluster_aggregate: size mismatch");
  }
  axpy(1.0, delta, out);
  return out;
}

ModelVector gs_aggregate(std::span<const ModelVector> cluster_models,
                         std::span<const double> cluster_data_sizes) {
  if (cluster_models.empty()) throw std::invalid_argument("gs_aggregate: no models");
  if (cluster_models.size() != cluster_data_sizes.size()) {
    throw std::invalid_argument("gs_aggregate: size mismatch");
  }
  const double total =
      std::accumulate(cluster_data_sizes.begin(), cluster_data_sizes.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("gs_aggregate: D = 0");
  ModelVector out(cluster_models.front().size());
  for (std::size_t k = 0; k < cluster_models.size(); ++k) {
    if (cluster_models[k].size() != out.size()) {
      throw std::invalid_argument("gs_aggregate: model size mismatch");
    }
    axpy(cluster_data_sizes[k] / total, cluster_models[k], out);
  }
  return out;
}

}  // namespace orbitfl::aggregation
