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

#include "orbitfl/domain/model_vector.h"
#include "orbitfl/domain/rng.h"

namespace orbitfl::learner {

//! Layer sizes. hidden == 0 selects multinomial logistic regression.
struct Architecture {
  int input_dim = 64;
  int hidden = 32;
  int classes = 4;

  bool operator==(const Architecture &) const = default;
};

//! One training example: input features and a target distribution.
struct Example {
  std::span<const float> input;
  std::span<const double> target;
};

/*! Softmax classifier over flat parameters.
 *
 * Parameter layout, hidden layer present: W1 (hidden x input), b1, W2
 * (classes x hidden), b2. Logistic mode: W (classes x input), b. The hidden
 * activation is tanh so the loss is smooth everywhere.
 */
class ModelSubstrate {
 public:
  explicit ModelSubstrate(Architecture arch);

  const Architecture &architecture() const { return arch_; }
  std::size_t parameter_count() const;

  //! Class probabilities for one input.
  std::vector<double> predict(const ModelVector &w,
                              std::span<const float> input) const;

  /*! Mean cross-entropy against (possibly soft) targets over the batch.
   *
   * When grad is non-null it is overwritten with the gradient of that mean.
   */
  double loss_and_gradient(const ModelVector &w, std::span<const Example> batch,
                           ModelVector *grad) const;

  //! Scaled-uniform (Glorot) weights, zero biases.
  ModelVector initialize(SeededRng &rng) const;

 private:
  double forward_backward(const ModelVector &w, const Example &ex,
                          ModelVector *grad, std::vector<double> &hidden,
                          std::vector<double> &logits) const;

  Architecture arch_;
};

//! SGD with heavy-ball momentum: v = mu v + g; w -= lr v.
class SgdMomentum {
 public:
  SgdMomentum(double learning_rate, double momentum, std::size_t dim)
      : lr_(learning_rate), momentum_(momentum), velocity_(dim) {}

  void step(ModelVector &w, const ModelVector &grad);
  void reset();

  double learning_rate() const { return lr_; }
  const ModelVector &velocity() const { return velocity_; }

 private:
  double lr_;
  double momentum_;
  ModelVector velocity_;
};

//! One-hot target vector.
std::vector<double> one_hot(int label, int classes);

//! Index of the largest entry; ties go to the lower index.
int argmax(std::span<const double> v);

}  // namespace orbitfl::learner
