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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "orbitfl/domain/model_vector.h"
#include "orbitfl/domain/rng.h"

namespace orbitfl {

using Vec3 = std::array<double, 3>;

//! Circular-orbit slot of one satellite.
struct OrbitalSlot {
  double plane_raan_deg = 0.0;
  double phase_deg = 0.0;  // [0, 360)
  double altitude_km = 1300.0;
  double inclination_deg = 53.0;
};

//! Image-like sample layout; features are stored row-major, channel last.
struct GridShape {
  int height = 8;
  int width = 8;
  int channels = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  bool operator==(const GridShape &) const = default;
};

struct Sample {
  std::vector<float> features;
  std::optional<int> label;  // absent on satellite shards

  bool operator==(const Sample &) const = default;
};

struct Dataset {
  GridShape shape;
  int num_classes = 0;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  bool operator==(const Dataset &) const = default;
};

using DatasetHandle = std::shared_ptr<const Dataset>;

//! One satellite client. Single-owner mutable record.
struct ClientState {
  int id = 0;
  int orbit_plane = 0;
  OrbitalSlot slot;
  DatasetHandle dataset;
  ModelVector local_model;

  std::optional<int> last_participation_round;  // m'
  double completion_time_s = 0.0;

  double cpu_freq_hz = 5e10;
  double cycles_per_sample = 5e8;
  double bandwidth_hz = 2e7;
  double tx_power_w = 1000.0;

  SeededRng rng{0, 0};
  SeededRng codec_rng{0, 0};

  //! Last uncompressed update this client computed; zero before its first.
  ModelVector previous_update;
  //! Latest nonzero update, used to refresh the clustering features.
  ModelVector latest_update;

  std::size_t data_size() const { return dataset ? dataset->size() : 0; }
};

struct GroundStation {
  int id = 0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  DatasetHandle labeled_dataset;
  std::vector<int> attached_ps_ids;
};

}  // namespace orbitfl
