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

#include <optional>
#include <span>
#include <vector>

#include "orbitfl/domain/model_vector.h"

namespace orbitfl::aggregation {

//! Raw staleness m - m', clamped to at least 1. A first-time participant
//! has staleness 1.
int staleness(int round, std::optional<int> last_participation_round);

//! p = 1 / phi with phi clamped to at least 1.
double staleness_weight(int phi);

//! A client that finished local training this round.
struct Completion {
  int client_id = 0;
  double time_s = 0.0;  // T_i^m = t_cmp + t_com
};

struct ParticipantSet {
  int round = 0;
  int cluster = 0;
  std::vector<int> client_ids;  // ascending
  double threshold_s = 0.0;     // T_s
};

/*! Picks the max(1, floor(epsilon * cluster_size)) fastest finishers, ties
 * by smaller id, capped at the number that finished.
 *
 * T_s is the epsilon nearest-rank quantile of the finish times of this
 * round pooled with `history` (earlier rounds of the same cluster), raised
 * to the slowest selected time so that every member lies within it. An
 * empty `finished` yields an empty set.
 */
ParticipantSet select_participants(int round, int cluster,
                                   std::span<const Completion> finished,
                                   double epsilon, int cluster_size,
                                   std::span<const std::vector<double>> history);

//! One participant's input to intra-cluster aggregation.
struct Contribution {
  int client_id = 0;
  double data_size = 0.0;  // |D_i|
  int staleness = 1;       // phi_i^m
  const ModelVector *update = nullptr;
};

/*! Coefficients (|D_i| / |D_m|) * (1 / phi_i) in the given order, where
 * |D_m| sums the participants' data. With normalize the coefficients are
 * rescaled to sum to 1.
 */
std::vector<double> aggregation_weights(std::span<const Contribution> parts,
                                        bool normalize);

/*! Sum of coefficient * update over participants in ascending client id.
 * Throws std::invalid_argument on an empty set or size mismatch.
 */
ModelVector aggregate_delta(std::span<const Contribution> parts,
                            bool normalize = false);

//! w + aggregate_delta(parts).
ModelVector intra_cluster_aggregate(const ModelVector &w,
                                    std::span<const Contribution> parts,
                                    bool normalize = false);

/*! Data-size-weighted average of cluster models. Throws
 * std::invalid_argument on no models, mismatched sizes or zero total data.
 */
ModelVector gs_aggregate(std::span<const ModelVector> cluster_models,
                         std::span<const double> cluster_data_sizes);

}  // namespace orbitfl::aggregation
