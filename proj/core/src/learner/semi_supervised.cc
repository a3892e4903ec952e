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
#include "orbitfl/learner/semi_supervised.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace orbitfl::learner {

namespace {

std::vector<std::size_t> shuffled(std::size_t n, SeededRng &rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_int(i)]);
  }
  return order;
}

// Owns the storage an Example batch points into.
struct BatchStore {
  std::vector<std::vector<float>> inputs;
  std::vector<std::vector<double>> targets;
  std::vector<Example> examples;

  void reserve(std::size_t n) {
    inputs.reserve(n);
    targets.reserve(n);
  }
  void add(std::vector<float> x, std::vector<double> y) {
    inputs.push_back(std::move(x));
    targets.push_back(std::move(y));
  }
  std::span<const Example> view() {
    examples.clear();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      examples.push_back(Example{inputs[i], targets[i]});
    }
    return examples;
  }
};

}  // namespace

std::vector<double> pseudo_label(const ModelSubstrate &model,
                                 const ModelVector &w, std::span<const float> x,
                                 const GridShape &shape,
                                 const AugmentPolicy &policy, SeededRng &rng) {
  const auto weak = weak_augment(x, shape, policy, rng);
  return model.predict(w, weak);
}

PseudoLabeledSet fixmatch_filter(std::span<const std::vector<double>> soft_labels,
                                 double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("fixmatch_filter: tau must be in (0, 1]");
  }
  PseudoLabeledSet out;
  out.threshold = tau;
  for (std::size_t i = 0; i < soft_labels.size(); ++i) {
    const auto &y = soft_labels[i];
    if (y.empty()) continue;
    const int best = argmax(y);
    if (y[best] < tau) continue;
    out.indices.push_back(i);
    out.soft_labels.push_back(y);
    out.hard_labels.push_back(one_hot(best, static_cast<int>(y.size())));
  }
  return out;
}

double semi_loss(const ModelSubstrate &model, const ModelVector &w,
                 std::span<const Example> fix_batch,
                 std::span<const Example> cut_batch, double lambda_w,
                 ModelVector *grad) {
  if (fix_batch.empty()) throw std::invalid_argument("semi_loss: empty fix batch");
  if (cut_batch.empty()) throw std::invalid_argument("semi_loss: empty cut batch");
  if (grad == nullptr) {
    return lambda_w * model.loss_and_gradient(w, fix_batch, nullptr) +
           (1.0 - lambda_w) * model.loss_and_gradient(w, cut_batch, nullptr);
  }
  ModelVector g_cut;
  const double l_fix = model.loss_and_gradient(w, fix_batch, grad);
  const double l_cut = model.loss_and_gradient(w, cut_batch, &g_cut);
  for (std::size_t i = 0; i < grad->size(); ++i) {
    (*grad)[i] = lambda_w * (*grad)[i] + (1.0 - lambda_w) * g_cut[i];
  }
  return lambda_w * l_fix + (1.0 - lambda_w) * l_cut;
}

double supervised_step(const ModelSubstrate &model, ModelVector &w,
                       std::span<const Example> batch, SgdMomentum &optimizer) {
  if (batch.empty()) throw std::invalid_argument("supervised_step: empty batch");
  ModelVector grad;
  const double loss = model.loss_and_gradient(w, batch, &grad);
  optimizer.step(w, grad);
  return loss;
}

double gs_train(const ModelSubstrate &model, ModelVector &w,
                const Dataset &labeled, int epochs, int batch_size,
                const AugmentPolicy &policy, SgdMomentum &optimizer,
                SeededRng &rng) {
  if (batch_size <= 0) throw std::invalid_argument("gs_train: batch_size <= 0");
  const std::size_t n = labeled.size();
  double last = 0.0;
  for (int e = 0; e < epochs && n > 0; ++e) {
    const auto order = shuffled(n, rng);
    double sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t end = std::min(n, start + batch_size);
      BatchStore store;
      store.reserve(end - start);
      for (std::size_t t = start; t < end; ++t) {
        const Sample &s = labeled.samples[order[t]];
        if (!s.label) throw std::invalid_argument("gs_train: unlabeled sample");
        store.add(weak_augment(s.features, labeled.shape, policy, rng),
                  one_hot(*s.label, labeled.num_classes));
      }
      sum += supervised_step(model, w, store.view(), optimizer);
      ++batches;
    }
    last = sum / batches;
  }
  return last;
}

LocalResult local_train(const ModelSubstrate &model,
                        const ModelVector &w_global, const Dataset &shard,
                        const TrainOptions &opts, SeededRng &rng) {
  if (opts.batch_size <= 0) {
    throw std::invalid_argument("local_train: batch_size <= 0");
  }
  LocalResult result;
  result.delta = ModelVector(w_global.size());

  std::vector<std::vector<double>> soft;
  soft.reserve(shard.size());
  for (const Sample &s : shard.samples) {
    soft.push_back(
        pseudo_label(model, w_global, s.features, shard.shape, opts.policy, rng));
  }
  result.samples_processed = shard.size();

  const PseudoLabeledSet fix = fixmatch_filter(soft, opts.confidence);
  result.pseudo_labeled = fix.size();
  if (fix.empty()) {
    result.skipped = true;
    return result;
  }

  // D_mix: |D_fix| CutMix pairs drawn with replacement from D_fix.
  const std::size_t n = fix.size();
  std::vector<CutMixSample> mix;
  mix.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t a = rng.uniform_int(n);
    const std::size_t b = rng.uniform_int(n);
    mix.push_back(cutmix(shard.samples[fix.indices[a]].features,
                         fix.soft_labels[a],
                         shard.samples[fix.indices[b]].features,
                         fix.soft_labels[b], shard.shape, opts.beta_param, rng));
  }

  ModelVector w = w_global;
  SgdMomentum optimizer(opts.learning_rate, opts.momentum, w.size());
  std::vector<Example> cut_batch;
  for (int e = 0; e < opts.epochs; ++e) {
    const auto order = shuffled(n, rng);
    double sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < n; start += opts.batch_size) {
      const std::size_t end = std::min(n, start + opts.batch_size);
      BatchStore fix_store;
      fix_store.reserve(end - start);
      cut_batch.clear();
      for (std::size_t t = start; t < end; ++t) {
        const std::size_t j = order[t];
        fix_store.add(strong_augment(shard.samples[fix.indices[j]].features,
                                     shard.shape, opts.policy, rng),
                      fix.hard_labels[j]);
        cut_batch.push_back(Example{mix[j].x, mix[j].y});
      }
      ModelVector grad;
      sum += semi_loss(model, w, fix_store.view(), cut_batch, opts.loss_weight,
                       &grad);
      optimizer.step(w, grad);
      ++batches;
    }
    result.epoch_losses.push_back(sum / batches);
    result.samples_processed += 2 * n;
  }
  result.delta = difference(w, w_global);
  return result;
}

Evaluation evaluate(const ModelSubstrate &model, const ModelVector &w,
                    const Dataset &labeled) {
  Evaluation out;
  std::size_t n = 0;
  std::size_t correct = 0;
  double loss = 0.0;
  for (const Sample &s : labeled.samples) {
    if (!s.label) continue;
    const auto p = model.predict(w, s.features);
    if (argmax(p) == *s.label) ++correct;
    loss -= std::log(std::max(p[*s.label], 1e-300));
    ++n;
  }
  if (n == 0) return out;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  out.loss = loss / static_cast<double>(n);
  return out;
}

}  // namespace orbitfl::learner
