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
#include "orbitfl/learner/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitfl::learner {

namespace {

// Softmax in place; returns log-sum-exp of the logits.
double softmax_inplace(std::vector<double> &z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double &v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double &v : z) v /= sum;
  return m + std::log(sum);
}

}  // namespace

ModelSubstrate::ModelSubstrate(Architecture arch) : arch_(arch) {
  if (arch_.input_dim <= 0 || arch_.classes < 2 || arch_.hidden < 0) {
    throw std::invalid_argument("ModelSubstrate: bad architecture");
  }
}

std::size_t ModelSubstrate::parameter_count() const {
  const std::size_t in = arch_.input_dim;
  const std::size_t h = arch_.hidden;
  const std::size_t c = arch_.classes;
  if (h == 0) return c * in + c;
  return h * in + h + c * h + c;
}

double ModelSubstrate::forward_backward(const ModelVector &w,
                                        const Example &ex, ModelVector *grad,
                                        std::vector<double> &hidden,
                                        std::vector<double> &logits) const {
  const int in = arch_.input_dim;
  const int h = arch_.hidden;
  const int c = arch_.classes;
  const double *p = w.values().data();

  std::vector<double> x(ex.input.begin(), ex.input.end());
  if (static_cast<int>(x.size()) != in) {
    throw std::invalid_argument("ModelSubstrate: input size mismatch");
  }

  const double *w_out;
  const double *b_out;
  int fan_in;
  const std::vector<double> *layer_in;
  if (h > 0) {
    const double *w1 = p;
    const double *b1 = p + static_cast<std::size_t>(h) * in;
    hidden.assign(h, 0.0);
    for (int j = 0; j < h; ++j) {
      double acc = b1[j];
      const double *row = w1 + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * x[i];
      hidden[j] = std::tanh(acc);
    }
    w_out = b1 + h;
    b_out = w_out + static_cast<std::size_t>(c) * h;
    fan_in = h;
    layer_in = &hidden;
  } else {
    w_out = p;
    b_out = p + static_cast<std::size_t>(c) * in;
    fan_in = in;
    layer_in = &x;
  }

  logits.assign(c, 0.0);
  for (int k = 0; k < c; ++k) {
    double acc = b_out[k];
    const double *row = w_out + static_cast<std::size_t>(k) * fan_in;
    for (int j = 0; j < fan_in; ++j) acc += row[j] * (*layer_in)[j];
    logits[k] = acc;
  }
  std::vector<double> z = logits;
  const double lse = softmax_inplace(z);  // z now holds probabilities

  double loss = 0.0;
  double target_mass = 0.0;
  for (int k = 0; k < c; ++k) {
    if (ex.target[k] != 0.0) loss -= ex.target[k] * (logits[k] - lse);
    target_mass += ex.target[k];
  }
  logits = z;
  if (grad == nullptr) return loss;

  // dL/dlogit = p * sum(t) - t.
  std::vector<double> dz(c);
  for (int k = 0; k < c; ++k) dz[k] = z[k] * target_mass - ex.target[k];

  double *g = grad->span().data();
  const std::size_t out_offset =
      h > 0 ? static_cast<std::size_t>(h) * in + h : 0;
  double *gw_out = g + out_offset;
  double *gb_out = gw_out + static_cast<std::size_t>(c) * fan_in;
  for (int k = 0; k < c; ++k) {
    double *row = gw_out + static_cast<std::size_t>(k) * fan_in;
    for (int j = 0; j < fan_in; ++j) row[j] += dz[k] * (*layer_in)[j];
    gb_out[k] += dz[k];
  }
  if (h > 0) {
    double *gw1 = g;
    double *gb1 = g + static_cast<std::size_t>(h) * in;
    for (int j = 0; j < h; ++j) {
      double da = 0.0;
      for (int k = 0; k < c; ++k) {
        da += w_out[static_cast<std::size_t>(k) * h + j] * dz[k];
      }
      const double dh = da * (1.0 - hidden[j] * hidden[j]);
      double *row = gw1 + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) row[i] += dh * x[i];
      gb1[j] += dh;
    }
  }
  return loss;
}

std::vector<double> ModelSubstrate::predict(const ModelVector &w,
                                            std::span<const float> input) const {
  std::vector<double> hidden;
  std::vector<double> probs;
  std::vector<double> dummy(arch_.classes, 0.0);
  forward_backward(w, Example{input, dummy}, nullptr, hidden, probs);
  return probs;
}

double ModelSubstrate::loss_and_gradient(const ModelVector &w,
                                         std::span<const Example> batch,
                                         ModelVector *grad) const {
  if (w.size() != parameter_count()) {
    throw std::invalid_argument("ModelSubstrate: parameter count mismatch");
  }
  if (batch.empty()) throw std::invalid_argument("loss_and_gradient: empty batch");
  if (grad != nullptr) *grad = ModelVector(parameter_count());
  std::vector<double> hidden;
  std::vector<double> probs;
  double total = 0.0;
  for (const auto &ex : batch) {
    total += forward_backward(w, ex, grad, hidden, probs);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  if (grad != nullptr) {
    for (double &g : *grad) g *= inv;
  }
  return total * inv;
}

ModelVector ModelSubstrate::initialize(SeededRng &rng) const {
  ModelVector w(parameter_count());
  const int in = arch_.input_dim;
  const int h = arch_.hidden;
  const int c = arch_.classes;
  std::size_t pos = 0;
  auto fill_layer = [&](int fan_out, int fan_in) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (int i = 0; i < fan_out * fan_in; ++i) {
      w[pos++] = rng.uniform(-limit, limit);
    }
    pos += fan_out;  // biases stay zero
  };
  if (h > 0) {
    fill_layer(h, in);
    fill_layer(c, h);
  } else {
    fill_layer(c, in);
  }
  return w;
}

void SgdMomentum::step(ModelVector &w, const ModelVector &grad) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    velocity_[i] = momentum_ * velocity_[i] + grad[i];
    w[i] -= lr_ * velocity_[i];
  }
}

void SgdMomentum::reset() {
  for (double &v : velocity_) v = 0.0;
}

std::vector<double> one_hot(int label, int classes) {
  if (label < 0 || label >= classes) {
    throw std::invalid_argument("one_hot: label out of range");
  }
  std::vector<double> v(classes, 0.0);
  v[label] = 1.0;
  return v;
}

int argmax(std::span<const double> v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace orbitfl::learner
