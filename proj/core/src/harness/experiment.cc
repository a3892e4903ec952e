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
#include "orbitfl/harness/experiment.h"

#include <filesystem>
#include <system_error>

#include "orbitfl/constellation/event_log.h"
#include "orbitfl/domain/error.h"
#include "orbitfl/harness/dataset.h"
#include "orbitfl/harness/metrics.h"
#include "orbitfl/harness/plot.h"

namespace orbitfl::harness {

ExperimentOutputs simulate(const ExperimentConfig &cfg,
                           const aggregation::DataBundle &data) {
  ExperimentOutputs out;
  out.metrics_csv = std::string(kMetricsHeader) + "\n";
  out.events_csv = std::string(constellation::kEventLogHeader) + "\n";
  out.clusters_csv = std::string(constellation::kClusterLogHeader) + "\n";

  auto state = aggregation::make_initial_state(cfg, data);
  out.initial_clusters = state.clusters;
  for (int m = 1; m <= cfg.rounds; ++m) {
    const auto rec = aggregation::run_round(state);
    out.metrics.push_back(rec.metrics);
    out.metrics_csv += format_metrics_row(rec.metrics) + "\n";
    for (const auto &e : rec.events) {
      out.events_csv += constellation::format_event_row(e) + "\n";
    }
    for (const auto &c : rec.clusters) {
      out.clusters_csv += constellation::format_cluster_row(c) + "\n";
    }
    if (cfg.dump_updates) {
      for (const auto &w : rec.wire) {
        const auto n = static_cast<std::uint32_t>(w.size());
        for (int i = 0; i < 4; ++i) out.updates.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
        out.updates.insert(out.updates.end(), w.begin(), w.end());
      }
    }
    if (cfg.stop_at_accuracy > 0.0 && rec.metrics.accuracy >= cfg.stop_at_accuracy) {
      break;
    }
  }
  out.final_model = state.global_model;
  return out;
}

ExperimentOutputs simulate(const ExperimentConfig &cfg) {
  return simulate(cfg, make_bundle(cfg));
}

void write_outputs(const ExperimentOutputs &out, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir, bool plots) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  write_file_atomic(dir / "metrics.csv", out.metrics_csv);
  write_file_atomic(dir / "events.csv", out.events_csv);
  write_file_atomic(dir / "clusters.csv", out.clusters_csv);
  write_file_atomic(dir / "config.txt", serialize_config(cfg));
  if (cfg.dump_updates) {
    write_file_atomic(dir / "updates.bin",
                      std::string_view(reinterpret_cast<const char *>(out.updates.data()),
                                       out.updates.size()));
  }
  if (plots) emit_plots(out.metrics, dir);
}

std::string assignment_csv(const clustering::ClusterAssignment &a) {
  std::string s = "client_id,cluster,is_ps\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    const int k = a.labels[i];
    const bool ps = k >= 0 && static_cast<std::size_t>(k) < a.ps_ids.size() &&
                    a.ps_ids[k] == static_cast<int>(i);
    s += std::to_string(i) + ',' + std::to_string(k) + ',' + (ps ? "1" : "0") + '\n';
  }
  return s;
}

int run_experiment(const std::filesystem::path &config_path,
                   const RunOptions &opts, std::string *error) {
  auto report = [&](const std::string &msg) {
    if (error) *error = msg;
  };
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    for (const auto &o : opts.overrides) apply_override(cfg, o);
    if (opts.stop_at_accuracy) cfg.stop_at_accuracy = *opts.stop_at_accuracy;
    cfg = validate_config(cfg);
  } catch (const ConfigError &e) {
    report(e.what());
    return kExitConfig;
  } catch (const IoError &e) {
    report(e.what());
    return kExitIo;
  }
  try {
    const auto out = simulate(cfg);
    write_outputs(out, cfg, opts.out_dir, opts.plots);
  } catch (const IoError &e) {
    report(e.what());
    return kExitIo;
  } catch (const std::invalid_argument &e) {
    // Data that does not fit the configuration, e.g. too few samples.
    report(e.what());
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace orbitfl::harness
