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
#include <span>
#include <vector>

#include "orbitfl/domain/model_vector.h"
#include "orbitfl/domain/rng.h"
#include "orbitfl/domain/types.h"
#include "orbitfl/learner/augment.h"
#include "orbitfl/learner/model.h"

namespace orbitfl::learner {

//! Soft label f(alpha(x), w) for one unlabeled sample.
std::vector<double> pseudo_label(const ModelSubstrate &model,
                                 const ModelVector &w, std::span<const float> x,
                                 const GridShape &shape,
                                 const AugmentPolicy &policy, SeededRng &rng);

//! High-confidence subset of a pseudo-labeled shard.
struct PseudoLabeledSet {
  double threshold = 0.0;
  std::vector<std::size_t> indices;              // into the shard
  std::vector<std::vector<double>> soft_labels;  // as predicted
  std::vector<std::vector<double>> hard_labels;  // one-hot argmax

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/*! Keeps sample i when max(soft_labels[i]) >= tau. Throws
 * std::invalid_argument unless tau is in (0, 1].
 */
PseudoLabeledSet fixmatch_filter(std::span<const std::vector<double>> soft_labels,
                                 double tau);

/*! lambda_w * CE(fix) + (1 - lambda_w) * CE(cut), each the batch mean.
 *
 * The caller supplies the fix batch already strongly augmented. grad, when
 * non-null, is overwritten with the gradient. Throws on an empty batch.
 */
double semi_loss(const ModelSubstrate &model, const ModelVector &w,
                 std::span<const Example> fix_batch,
                 std::span<const Example> cut_batch, double lambda_w,
                 ModelVector *grad);

/*! One optimizer step on the mean cross-entropy of a labeled batch.
 * Returns the loss before the step. Throws on an empty batch.
 */
double supervised_step(const ModelSubstrate &model, ModelVector &w,
                       std::span<const Example> batch, SgdMomentum &optimizer);

struct TrainOptions {
  int epochs = 1;
  int batch_size = 64;
  double confidence = 0.95;
  double beta_param = 1.0;
  double loss_weight = 0.5;
  double learning_rate = 0.01;
  double momentum = 0.9;
  AugmentPolicy policy;
};

/*! Supervised epochs over a labeled shard with weak augmentation.
 * Returns the mean batch loss of the last epoch, 0 when nothing ran.
 */
double gs_train(const ModelSubstrate &model, ModelVector &w,
                const Dataset &labeled, int epochs, int batch_size,
                const AugmentPolicy &policy, SgdMomentum &optimizer,
                SeededRng &rng);

struct LocalResult {
  bool skipped = false;
  ModelVector delta;  // w_final - w_global; zero when skipped
  std::size_t pseudo_labeled = 0;
  //! Forward/backward sample passes, the D_i used for compute time.
  std::size_t samples_processed = 0;
  std::vector<double> epoch_losses;  // mean semi_loss per epoch
};

/*! One round of semi-supervised local training from w_global.
 *
 * Pseudo-labels the shard, filters at opts.confidence and builds the
 * CutMix set once. An empty filtered set is a skip. Otherwise runs
 * opts.epochs of mini-batch SGD with momentum on semi_loss.
 */
LocalResult local_train(const ModelSubstrate &model,
                        const ModelVector &w_global, const Dataset &shard,
                        const TrainOptions &opts, SeededRng &rng);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;  // mean cross-entropy
};

//! Accuracy and mean loss over the labeled samples; zeros when none.
Evaluation evaluate(const ModelSubstrate &model, const ModelVector &w,
                    const Dataset &labeled);

}  // namespace orbitfl::learner
