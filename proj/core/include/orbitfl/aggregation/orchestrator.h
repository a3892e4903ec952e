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

#include <cstdint>
#include <deque>
#include <vector>

#include "orbitfl/aggregation/aggregate.h"
#include "orbitfl/clustering/clustering.h"
#include "orbitfl/constellation/accounting.h"
#include "orbitfl/constellation/event_log.h"
#include "orbitfl/domain/config.h"
#include "orbitfl/domain/types.h"
#include "orbitfl/learner/model.h"
#include "orbitfl/learner/semi_supervised.h"

namespace orbitfl::aggregation {

struct RoundMetrics {
  int round = 0;
  double wall_clock_s = 0.0;  // T_c
  double accuracy = 0.0;
  double loss = 0.0;
  double e_tx_j = 0.0;
  double e_cmp_j = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  int participants = 0;
  int skipped = 0;

  bool operator==(const RoundMetrics &) const = default;
};

//! Data placement for one experiment.
struct DataBundle {
  DatasetHandle gs_labeled;
  std::vector<DatasetHandle> client_shards;  // one per client
  DatasetHandle eval;                        // labeled, held out
};

//! Everything a round produces besides the state change.
struct RoundRecord {
  RoundMetrics metrics;
  std::vector<constellation::EventRow> events;      // ascending client id
  std::vector<constellation::ClusterRow> clusters;  // ascending cluster
  std::vector<ParticipantSet> participants;         // per cluster
  std::vector<int> skipped_ids;  // no usable update this round, ascending
  std::vector<std::vector<std::uint8_t>> wire;      // uploads, ascending id
  constellation::TimeReport time;
  constellation::EnergyReport energy;
};

/*! Mutable simulation state. Clients, cluster models and the GS model are
 * single-owner; run_round advances it by one round.
 */
struct SimulationState {
  SimulationState(const ExperimentConfig &config, learner::Architecture arch);

  ExperimentConfig cfg;
  learner::ModelSubstrate model;
  learner::TrainOptions train;
  double noise_w_hz = 0.0;

  ModelVector global_model;
  std::vector<ModelVector> cluster_models;
  std::vector<ClientState> clients;
  GroundStation gs;
  clustering::ClusterAssignment clusters;
  DatasetHandle eval;

  learner::SgdMomentum gs_optimizer;
  SeededRng gs_rng;
  SeededRng clustering_rng;

  //! Finish times of earlier rounds per cluster, newest last.
  std::vector<std::deque<std::vector<double>>> history;
  double sim_time_s = 0.0;
  int round = 0;  // last completed round
};

learner::Architecture architecture_for(const ExperimentConfig &cfg,
                                       const GridShape &shape,
                                       int num_classes);
learner::TrainOptions train_options(const ExperimentConfig &cfg);

//! Earth-fixed client positions at time t.
std::vector<Vec3> client_positions(const SimulationState &state, double t);

/*! Builds clients and the GS, initializes the model, runs the unlogged
 * warm-up (GS supervised epochs, then one local epoch per client that
 * keeps every pseudo-label) and clusters on the warm-up updates.
 * Throws std::invalid_argument when the bundle does not match cfg.
 */
SimulationState make_initial_state(const ExperimentConfig &cfg,
                                   const DataBundle &data);

//! Re-runs clustering and PS election from current positions and the
//! latest client updates. Cluster models restart from the global model.
void recluster(SimulationState &state);

/*! Executes round state.round + 1: GS supervised training and broadcast,
 * client training, compression, participant selection, intra-cluster
 * aggregation, GS aggregation and accounting.
 */
RoundRecord run_round(SimulationState &state);

}  // namespace orbitfl::aggregation
