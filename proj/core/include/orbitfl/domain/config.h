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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace orbitfl {

/*! Experiment configuration.
 *
 * Text form is flat `key = value` lines with `#` comments; each key is the
 * member name below. Keys absent from a file keep the defaults shown here.
 */
struct ExperimentConfig {
  // Federation shape and schedule.
  int num_clients = 20;
  int num_clusters = 4;
  int rounds = 200;
  int local_epochs = 1;
  int recluster_interval = 50;  // 0 disables re-clustering
  int gs_interval = 1;
  int gs_epochs = 1;
  int selection_window = 5;
  int kmeans_max_iters = 100;

  // Semi-supervised learning.
  double confidence = 0.95;   // pseudo-label threshold
  double beta_param = 1.0;    // CutMix Beta(mu, mu)
  double loss_weight = 0.5;   // FixMatch share of the semi-supervised loss
  double cluster_weight = 0.4;  // gradient vs. geography in the joint feature
  double selection_rate = 0.6;  // fastest fraction aggregated per cluster
  double learning_rate = 0.01;
  int batch_size = 64;
  double momentum = 0.9;

  // Compression.
  bool compression = true;
  double sparsity_ratio = 0.125;  // k / d_w
  double gradient_threshold = 0.01;  // 4/8-bit switch

  // Aggregation.
  bool normalize_weights = false;
  bool staleness_weighting = true;  // false: every staleness treated as 1

  // Constellation and link budget.
  double altitude_km = 1300.0;
  double inclination_deg = 53.0;
  int num_planes = 4;
  bool require_line_of_sight = true;
  double carrier_hz = 27e9;
  double bandwidth_hz = 2e7;
  double tx_power_dbw = 30.0;
  double noise_density_dbm_hz = -174.0;
  double cpu_freq_hz = 5e10;
  double cpu_freq_spread = 0.5;  // f_i drawn from f * U[1 - s, 1 + s]
  double cycles_per_sample = 5e8;
  double energy_coefficient = 1e-28;
  double aggregation_delay_s = 0.0;
  double gs_lat_deg = 0.0;
  double gs_lon_deg = 0.0;

  // Model substrate.
  std::string model = "mlp";  // "mlp" or "logistic"
  int hidden_units = 32;

  // Augmentation policy.
  double flip_prob = 0.5;
  double shift_fraction = 0.125;
  double noise_scale = 0.1;
  double cutout_fraction = 0.25;

  // Data.
  int num_classes = 4;
  int samples_per_class = 500;
  double separation = 0.6;
  double eval_fraction = 0.1;
  double labeled_fraction = 0.1;
  double designated_fraction = 0.2;
  std::string data_dir;  // empty: synthesize

  // Run control.
  std::uint64_t seed = 42;
  int threads = 1;
  bool dump_updates = false;
  double stop_at_accuracy = 0.0;  // 0 disables early stop

  bool operator==(const ExperimentConfig &) const = default;
};

//! Parses `key = value` text over the defaults. Throws ConfigError on an
//! unknown key or an unparsable value. Ranges are not checked here.
ExperimentConfig parse_config(std::string_view text);

//! Reads and parses a config file. Throws IoError if unreadable.
ExperimentConfig load_config(const std::filesystem::path &path);

//! Returns cfg unchanged if every range invariant holds, else throws
//! ConfigError naming the offending key.
ExperimentConfig validate_config(const ExperimentConfig &cfg);

//! Applies one `key=value` override.
void apply_override(ExperimentConfig &cfg, std::string_view assignment);

//! Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig &cfg);

//! All recognized keys, in canonical order.
std::vector<std::string> config_keys();

//! Unit conversions used by the link budget.
double dbw_to_watts(double dbw);
double dbm_per_hz_to_watts_per_hz(double dbm_per_hz);

}  // namespace orbitfl
