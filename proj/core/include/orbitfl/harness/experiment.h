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
#include <optional>
#include <string>
#include <vector>

#include "orbitfl/aggregation/orchestrator.h"
#include "orbitfl/clustering/clustering.h"
#include "orbitfl/domain/config.h"

namespace orbitfl::harness {

//! In-memory result of a whole run. Text members are the exact file
//! contents run_experiment writes.
struct ExperimentOutputs {
  std::vector<aggregation::RoundMetrics> metrics;
  std::string metrics_csv;
  std::string events_csv;
  std::string clusters_csv;
  //! Concatenated u32 LE length + wire bytes of every upload, in order.
  std::vector<std::uint8_t> updates;
  ModelVector final_model;
  clustering::ClusterAssignment initial_clusters;
};

/*! Runs warm-up and up to cfg.rounds rounds on the given data. Stops early
 * once accuracy reaches cfg.stop_at_accuracy when that is positive.
 * Wire bytes are collected only when cfg.dump_updates is set.
 */
ExperimentOutputs simulate(const ExperimentConfig &cfg,
                           const aggregation::DataBundle &data);

//! simulate() on make_bundle(cfg).
ExperimentOutputs simulate(const ExperimentConfig &cfg);

/*! Writes metrics.csv, events.csv, clusters.csv, updates.bin (when
 * dumping) and, with plots, the SVG charts. Every file is written
 * atomically. Throws IoError.
 */
void write_outputs(const ExperimentOutputs &out, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir, bool plots);

//! `client_id,cluster,is_ps` rows, ascending client id.
std::string assignment_csv(const clustering::ClusterAssignment &a);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::vector<std::string> overrides;  // key=value, applied in order
  std::optional<double> stop_at_accuracy;
  bool plots = true;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/*! Loads and validates the config (after overrides), simulates and
 * writes outputs. Returns kExitOk, kExitConfig on configuration errors or
 * kExitIo on I/O errors; the message goes to `error` when non-null.
 */
int run_experiment(const std::filesystem::path &config_path,
                   const RunOptions &opts, std::string *error = nullptr);

}  // namespace orbitfl::harness
