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
#include "orbitfl/learner/augment.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbitfl::learner {

namespace {

std::size_t cell(const GridShape &s, int r, int c, int ch) {
  return (static_cast<std::size_t>(r) * s.width + c) * s.channels + ch;
}

void check_shape(std::span<const float> x, const GridShape &shape) {
  if (x.size() != shape.size()) {
    throw std::invalid_argument("augment: grid size mismatch");
  }
}

int max_shift(int extent, double fraction) {
  return static_cast<int>(std::floor(extent * fraction));
}

void zero_box(std::vector<float> &x, const GridShape &shape, const Box &box) {
  for (int r = box.top; r < box.top + box.height; ++r) {
    for (int c = box.left; c < box.left + box.width; ++c) {
      for (int ch = 0; ch < shape.channels; ++ch) x[cell(shape, r, c, ch)] = 0;
    }
  }
}

Box place_box(const GridShape &shape, int h, int w, SeededRng &rng) {
  Box box;
  box.height = h;
  box.width = w;
  box.top = static_cast<int>(rng.uniform_int(shape.height - h + 1));
  box.left = static_cast<int>(rng.uniform_int(shape.width - w + 1));
  return box;
}

int scaled_side(int extent, double area_fraction) {
  const int side =
      static_cast<int>(std::lround(extent * std::sqrt(area_fraction)));
  return std::clamp(side, 0, extent);
}

}  // namespace

WeakDraw draw_weak(const GridShape &shape, const AugmentPolicy &policy,
                   SeededRng &rng) {
  WeakDraw d;
  d.flip = rng.bernoulli(policy.flip_prob);
  const int sx = max_shift(shape.width, policy.shift_fraction);
  const int sy = max_shift(shape.height, policy.shift_fraction);
  d.dx = static_cast<int>(rng.uniform_int(2 * sx + 1)) - sx;
  d.dy = static_cast<int>(rng.uniform_int(2 * sy + 1)) - sy;
  return d;
}

std::vector<float> apply_weak(std::span<const float> x, const GridShape &shape,
                              const WeakDraw &draw) {
  check_shape(x, shape);
  std::vector<float> out(x.size());
  for (int r = 0; r < shape.height; ++r) {
    const int src_r = std::clamp(r - draw.dy, 0, shape.height - 1);
    for (int c = 0; c < shape.width; ++c) {
      int src_c = std::clamp(c - draw.dx, 0, shape.width - 1);
      if (draw.flip) src_c = shape.width - 1 - src_c;
      for (int ch = 0; ch < shape.channels; ++ch) {
        out[cell(shape, r, c, ch)] = x[cell(shape, src_r, src_c, ch)];
      }
    }
  }
  return out;
}

std::vector<float> weak_augment(std::span<const float> x,
                                const GridShape &shape,
                                const AugmentPolicy &policy, SeededRng &rng) {
  return apply_weak(x, shape, draw_weak(shape, policy, rng));
}

std::vector<float> strong_augment(std::span<const float> x,
                                  const GridShape &shape,
                                  const AugmentPolicy &policy, SeededRng &rng) {
  std::vector<float> out = weak_augment(x, shape, policy, rng);
  if (policy.noise_scale > 0.0 && !out.empty()) {
    double mean = 0.0;
    for (float v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (float v : x) var += (v - mean) * (v - mean);
    const double sigma =
        policy.noise_scale * std::sqrt(var / static_cast<double>(x.size()));
    for (float &v : out) v = static_cast<float>(v + sigma * rng.normal());
  }
  if (policy.cutout_fraction > 0.0) {
    const int h = scaled_side(shape.height, policy.cutout_fraction);
    const int w = scaled_side(shape.width, policy.cutout_fraction);
    zero_box(out, shape, place_box(shape, h, w, rng));
  }
  return out;
}

Box draw_box(const GridShape &shape, double lambda, SeededRng &rng) {
  return place_box(shape, scaled_side(shape.height, lambda),
                   scaled_side(shape.width, lambda), rng);
}

CutMixSample cutmix_with_box(std::span<const float> x1,
                             std::span<const double> y1,
                             std::span<const float> x2,
                             std::span<const double> y2,
                             const GridShape &shape, const Box &box) {
  check_shape(x1, shape);
  check_shape(x2, shape);
  if (y1.size() != y2.size()) {
    throw std::invalid_argument("cutmix: label size mismatch");
  }
  if (box.top < 0 || box.left < 0 || box.top + box.height > shape.height ||
      box.left + box.width > shape.width) {
    throw std::invalid_argument("cutmix: box outside grid");
  }
  CutMixSample out;
  out.box = box;
  out.x.assign(x2.begin(), x2.end());
  for (int r = box.top; r < box.top + box.height; ++r) {
    for (int c = box.left; c < box.left + box.width; ++c) {
      for (int ch = 0; ch < shape.channels; ++ch) {
        const auto i = cell(shape, r, c, ch);
        out.x[i] = x1[i];
      }
    }
  }
  out.lambda = static_cast<double>(box.height * box.width) /
               static_cast<double>(shape.height * shape.width);
  out.y.resize(y1.size());
  for (std::size_t k = 0; k < y1.size(); ++k) {
    out.y[k] = out.lambda * y1[k] + (1.0 - out.lambda) * y2[k];
  }
  return out;
}

CutMixSample cutmix(std::span<const float> x1, std::span<const double> y1,
                    std::span<const float> x2, std::span<const double> y2,
                    const GridShape &shape, double mu, SeededRng &rng) {
  check_shape(x1, shape);
  check_shape(x2, shape);
  const double lambda = rng.beta(mu, mu);
  return cutmix_with_box(x1, y1, x2, y2, shape, draw_box(shape, lambda, rng));
}

}  // namespace orbitfl::learner
