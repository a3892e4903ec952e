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

// orbitfl command-line entry point: run, partition, inspect clusters, plot.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbitfl/aggregation/orchestrator.h"
#include "orbitfl/domain/config.h"
#include "orbitfl/domain/error.h"
#include "orbitfl/harness/dataset.h"
#include "orbitfl/harness/experiment.h"
#include "orbitfl/harness/metrics.h"
#include "orbitfl/harness/plot.h"
#include "orbitfl/harness/shard_io.h"

namespace {

using orbitfl::ExperimentConfig;
namespace harness = orbitfl::harness;

// Config from an optional file plus overrides, validated.
ExperimentConfig resolve_config(const std::string &path,
                                const std::vector<std::string> &overrides) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : orbitfl::load_config(path);
  for (const auto &o : overrides) orbitfl::apply_override(cfg, o);
  return orbitfl::validate_config(cfg);
}

// Maps the library's error types onto the documented exit codes.
template <typename Fn>
int guarded(Fn &&fn) {
  try {
    return fn();
  } catch (const orbitfl::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfig;
  } catch (const orbitfl::IoError &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return harness::kExitIo;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfig;
  }
}

int cmd_partition(const std::string &config, const std::vector<std::string> &overrides,
                  const std::filesystem::path &out) {
  const auto cfg = resolve_config(config, overrides);
  auto data = harness::prepare_synthetic(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw orbitfl::IoError("cannot create " + out.string());
  harness::write_shard(out / harness::kGsShardName, data.partition.gs_labeled);
  harness::write_shard(out / harness::kEvalShardName, data.eval);
  for (std::size_t i = 0; i < data.partition.clients.size(); ++i) {
    harness::write_shard(out / harness::client_shard_name(static_cast<int>(i)),
                         data.partition.clients[i]);
  }
  std::cout << "wrote " << data.partition.clients.size() + 2 << " shards to "
            << out.string() << "\n";
  return harness::kExitOk;
}

int cmd_inspect_clusters(const std::string &config,
                         const std::vector<std::string> &overrides) {
  const auto cfg = resolve_config(config, overrides);
  const auto state = orbitfl::aggregation::make_initial_state(cfg, harness::make_bundle(cfg));
  std::cout << harness::assignment_csv(state.clusters);
  return harness::kExitOk;
}

int cmd_plot(const std::filesystem::path &metrics, const std::filesystem::path &out) {
  const auto rows = harness::parse_metrics(harness::read_file(metrics));
  if (rows.empty()) {
    std::cerr << "warning: " << metrics.string() << " has no rows; no plots written\n";
    return harness::kExitOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw orbitfl::IoError("cannot create " + out.string());
  for (const auto &p : harness::emit_plots(rows, out)) std::cout << p.string() << "\n";
  return harness::kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"orbitfl: semi-supervised hierarchical FL simulator for LEO constellations"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::optional<double> stop_at;
  bool no_plots = false;

  auto *run = app.add_subcommand("run", "run an experiment and write its artifacts");
  run->add_option("config", config, "config file (key = value lines)")->required();
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("--override", overrides, "key=value, repeatable")->take_all();
  run->add_option("--stop-at-accuracy", stop_at, "stop once accuracy reaches this value");
  run->add_flag("--no-plots", no_plots, "skip SVG charts");

  auto *part = app.add_subcommand("partition", "synthesize and write per-client shards");
  part->add_option("-c,--config", config, "config file");
  part->add_option("-o,--out", out_dir, "output directory")->required();
  part->add_option("--override", overrides, "key=value, repeatable")->take_all();

  auto *inspect = app.add_subcommand("inspect", "inspect simulator state");
  inspect->require_subcommand(1);
  auto *clusters = inspect->add_subcommand("clusters", "print the warm-up clustering as CSV");
  clusters->add_option("-c,--config", config, "config file");
  clusters->add_option("--override", overrides, "key=value, repeatable")->take_all();

  std::string metrics_path;
  auto *plot = app.add_subcommand("plot", "render SVG charts from a metrics CSV");
  plot->add_option("metrics", metrics_path, "metrics.csv")->required();
  plot->add_option("-o,--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return harness::kExitConfig;
  }

  if (run->parsed()) {
    harness::RunOptions opts;
    opts.out_dir = out_dir;
    opts.overrides = overrides;
    opts.stop_at_accuracy = stop_at;
    opts.plots = !no_plots;
    std::string error;
    const int code = harness::run_experiment(config, opts, &error);
    if (code != harness::kExitOk) std::cerr << "error: " << error << "\n";
    return code;
  }
  if (part->parsed()) {
    return guarded([&] { return cmd_partition(config, overrides, out_dir); });
  }
  if (clusters->parsed()) {
    return guarded([&] { return cmd_inspect_clusters(config, overrides); });
  }
  if (plot->parsed()) {
    return guarded([&] { return cmd_plot(metrics_path, out_dir); });
  }
  return harness::kExitConfig;
}
