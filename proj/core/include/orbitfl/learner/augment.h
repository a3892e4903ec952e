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

#include "orbitfl/domain/rng.h"
#include "orbitfl/domain/types.h"

namespace orbitfl::learner {

struct AugmentPolicy {
  double flip_prob = 0.5;
  double shift_fraction = 0.125;  // max shift as a fraction of H and W
  double noise_scale = 0.1;       // Gaussian sigma relative to sample std
  double cutout_fraction = 0.25;  // zeroed patch area, 0 disables
};

//! Random parameters of one weak augmentation.
struct WeakDraw {
  bool flip = false;
  int dx = 0;  // column shift
  int dy = 0;  // row shift
};

//! Axis-aligned rectangle in grid cells.
struct Box {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;
};

WeakDraw draw_weak(const GridShape &shape, const AugmentPolicy &policy,
                   SeededRng &rng);

//! Horizontal flip, then shift with edge replication.
std::vector<float> apply_weak(std::span<const float> x, const GridShape &shape,
                              const WeakDraw &draw);

std::vector<float> weak_augment(std::span<const float> x,
                                const GridShape &shape,
                                const AugmentPolicy &policy, SeededRng &rng);

/*! Stand-in strong augmentation: a weak draw, then additive Gaussian noise
 * with sigma = noise_scale * std(x), then one zeroed cutout patch covering
 * cutout_fraction of the grid. With noise_scale = 0 and cutout_fraction = 0
 * it consumes the same draws as weak_augment and returns the same grid.
 */
std::vector<float> strong_augment(std::span<const float> x,
                                  const GridShape &shape,
                                  const AugmentPolicy &policy, SeededRng &rng);

struct CutMixSample {
  std::vector<float> x;
  std::vector<double> y;
  //! Fraction of cells taken from the first sample; equals the mask area.
  double lambda = 0.0;
  Box box;
};

/*! Pastes box from x1 into x2: x = M * x1 + (1 - M) * x2 and
 * y = lambda * y1 + (1 - lambda) * y2 with lambda = box area / grid area.
 */
CutMixSample cutmix_with_box(std::span<const float> x1,
                             std::span<const double> y1,
                             std::span<const float> x2,
                             std::span<const double> y2,
                             const GridShape &shape, const Box &box);

/*! Draws lambda ~ Beta(mu, mu), sizes the box to sqrt(lambda) of each side
 * (rounded to whole cells) and places it uniformly inside the grid. The
 * returned lambda is the realized mask fraction. Throws on shape mismatch.
 */
CutMixSample cutmix(std::span<const float> x1, std::span<const double> y1,
                    std::span<const float> x2, std::span<const double> y2,
                    const GridShape &shape, double mu, SeededRng &rng);

//! Box covering about lambda of the grid, placed uniformly at random.
Box draw_box(const GridShape &shape, double lambda, SeededRng &rng);

}  // namespace orbitfl::learner
