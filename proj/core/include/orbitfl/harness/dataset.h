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

#include <vector>

#include "orbitfl/aggregation/orchestrator.h"
#include "orbitfl/domain/config.h"
#include "orbitfl/domain/rng.h"
#include "orbitfl/domain/types.h"

namespace orbitfl::harness {

/*! Class-conditional Gaussian blobs on a grid.
 *
 * Each class gets a prototype: white noise, mirrored to be left-right
 * symmetric, box-blurred and scaled to RMS `separation`. A sample is its
 * class prototype plus unit Gaussian noise, rounded to float32. Samples
 * are ordered by class. Throws std::invalid_argument if num_classes < 2.
 */
Dataset synth_dataset(int num_classes, int per_class, const GridShape &shape,
                      double separation, SeededRng &rng);

struct Split {
  Dataset selected;
  Dataset rest;
};

//! Moves round(fraction * n_c) random samples of every class c into
//! `selected`. Both parts keep the original relative order.
Split stratified_split(const Dataset &data, double fraction, SeededRng &rng);

struct Partition {
  Dataset gs_labeled;
  std::vector<Dataset> clients;  // unlabeled
  //! Stripped labels, parallel to clients, kept for audits only.
  std::vector<std::vector<int>> client_truth;
};

/*! Non-IID placement.
 *
 * A stratified labeled_fraction goes to the GS. The rest loses its labels
 * and is dealt into num_clients near-equal shards. Client i takes
 * round(designated_fraction * size) samples of class i mod num_classes and
 * fills the remainder evenly from the other classes, with leftover units
 * rotated across clients. A class pool that runs dry is replaced by the
 * fullest remaining pool. Throws std::invalid_argument when the dataset
 * holds fewer than 10 samples per client.
 */
Partition partition_noniid(const Dataset &data, int num_clients,
                           double labeled_fraction, double designated_fraction,
                           SeededRng &rng);

struct PreparedData {
  Dataset eval;
  Partition partition;
};

//! Synthesizes cfg's dataset, holds out eval_fraction (stratified) and
//! partitions the rest.
PreparedData prepare_synthetic(const ExperimentConfig &cfg);

//! Wraps prepared data as shared handles.
aggregation::DataBundle to_bundle(PreparedData data);

/*! Data for an experiment: loaded from cfg.data_dir when set, otherwise
 * synthesized, with a stratified eval_fraction held out before
 * partitioning.
 */
aggregation::DataBundle make_bundle(const ExperimentConfig &cfg);

}  // namespace orbitfl::harness
