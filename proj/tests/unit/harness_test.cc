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
#include <gtest/gtest.h>

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.h"
#include "orbitfl/domain/error.h"
#include "orbitfl/harness/dataset.h"
#include "orbitfl/harness/experiment.h"
#include "orbitfl/harness/metrics.h"
#include "orbitfl/harness/plot.h"
#include "orbitfl/harness/shard_io.h"

namespace orbitfl::harness {
namespace {

namespace fs = std::filesystem;

// Fresh per-test scratch directory.
fs::path scratch() {
  const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir = fs::temp_directory_path() / "orbitfl_harness_test" /
                       (std::string(info->test_suite_name()) + "." + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path &p, const std::string &s) {
  std::ofstream(p, std::ios::binary) << s;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.num_clients = 8;
  cfg.num_clusters = 2;
  cfg.samples_per_class = 100;
  cfg.rounds = 3;
  cfg.hidden_units = 8;
  return cfg;
}

std::string tiny_config_text(int rounds) {
  auto cfg = tiny_config();
  cfg.rounds = rounds;
  return serialize_config(cfg);
}

std::vector<double> centroid(const Dataset &d, int cls) {
  std::vector<double> c(d.shape.size(), 0.0);
  int n = 0;
  for (const auto &s : d.samples) {
    if (s.label != cls) continue;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += s.features[j];
    ++n;
  }
  for (auto &x : c) x /= n;
  return c;
}

TEST(SynthDataset, ShapeAndLabels) {
  SeededRng rng(1, streams::kSynthesis);
  const GridShape shape{8, 8, 1};
  const auto d = synth_dataset(4, 25, shape, 0.6, rng);
  EXPECT_EQ(d.size(), 100u);
  EXPECT_EQ(d.num_classes, 4);
  for (std::size_t i = 0; i < d.size(); ++i) {
    ASSERT_EQ(d.samples[i].features.size(), 64u);
    ASSERT_EQ(d.samples[i].label, static_cast<int>(i / 25));
  }
  EXPECT_TRUE(synth_dataset(4, 0, shape, 0.6, rng).empty());
  EXPECT_THROW(synth_dataset(1, 10, shape, 0.6, rng), std::invalid_argument);
}

TEST(SynthDataset, PrototypesAreMirrored) {
  // Unit noise averages out over many samples, leaving the prototype.
  SeededRng rng(2, streams::kSynthesis);
  const GridShape shape{8, 8, 1};
  const auto d = synth_dataset(2, 4000, shape, 3.0, rng);
  const auto c = centroid(d, 0);
  for (int r = 0; r < 8; ++r) {
    for (int x = 0; x < 4; ++x) {
      EXPECT_NEAR(c[r * 8 + x], c[r * 8 + 7 - x], 0.1);
    }
  }
}

TEST(SynthDataset, WideSeparationIsCentroidSeparable) {
  SeededRng rng(3, streams::kSynthesis);
  const GridShape shape{8, 8, 1};
  const auto d = synth_dataset(4, 100, shape, 10.0, rng);
  std::vector<std::vector<double>> cs;
  for (int k = 0; k < 4; ++k) cs.push_back(centroid(d, k));
  int correct = 0;
  for (const auto &s : d.samples) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      double dist = 0.0;
      for (std::size_t j = 0; j < 64; ++j) dist += std::pow(s.features[j] - cs[k][j], 2);
      if (dist < best_d) {
        best_d = dist;
        best = k;
      }
    }
    correct += best == *s.label;
  }
  EXPECT_EQ(correct, 400);
}

TEST(SynthDataset, DefaultTaskIsLearnableCentrally) {
  ExperimentConfig cfg;
  cfg.model = "logistic";
  EXPECT_GE(testing::centralized_accuracy(cfg, 20), 0.95);
}

TEST(Partition, NonIidPlacement) {
  SeededRng synth(4, streams::kSynthesis);
  const auto d = synth_dataset(4, 250, GridShape{8, 8, 1}, 0.6, synth);
  SeededRng rng(4, streams::kPartitioner);
  const auto p = partition_noniid(d, 4, 0.1, 0.2, rng);
  ASSERT_EQ(p.clients.size(), 4u);
  ASSERT_EQ(p.client_truth.size(), 4u);
  EXPECT_EQ(p.gs_labeled.size(), 100u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(std::count_if(p.gs_labeled.samples.begin(), p.gs_labeled.samples.end(),
                            [&](const Sample &s) { return s.label == k; }),
              25);
  }
  std::size_t total = p.gs_labeled.size();
  std::size_t lo = SIZE_MAX, hi = 0;
  std::vector<int> designated_hits(4, 0);
  for (int i = 0; i < 4; ++i) {
    const auto &shard = p.clients[i];
    const auto &truth = p.client_truth[i];
    ASSERT_EQ(truth.size(), shard.size());
    for (const auto &s : shard.samples) EXPECT_FALSE(s.label.has_value());
    total += shard.size();
    lo = std::min(lo, shard.size());
    hi = std::max(hi, shard.size());
    const auto own = std::count(truth.begin(), truth.end(), i % 4);
    const double expected = 0.2 * static_cast<double>(shard.size());
    EXPECT_LE(std::abs(static_cast<double>(own) - expected), 1.0) << "client " << i;
    ++designated_hits[i % 4];
  }
  EXPECT_EQ(designated_hits, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(total, d.size());
  EXPECT_LE(hi - lo, 1u);
}

TEST(Partition, SamplesAreNotDuplicated) {
  SeededRng synth(5, streams::kSynthesis);
  const auto d = synth_dataset(3, 60, GridShape{8, 8, 1}, 0.6, synth);
  SeededRng rng(5, streams::kPartitioner);
  const auto p = partition_noniid(d, 5, 0.1, 0.2, rng);
  std::vector<std::vector<float>> seen;
  for (const auto &s : p.gs_labeled.samples) seen.push_back(s.features);
  for (const auto &c : p.clients) {
    for (const auto &s : c.samples) seen.push_back(s.features);
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  EXPECT_EQ(seen.size(), d.size());
}

TEST(Partition, TooSmallInputThrows) {
  SeededRng synth(6, streams::kSynthesis);
  const auto d = synth_dataset(2, 20, GridShape{8, 8, 1}, 0.6, synth);
  SeededRng rng(6, streams::kPartitioner);
  EXPECT_THROW(partition_noniid(d, 8, 0.1, 0.2, rng), std::invalid_argument);
}

TEST(ShardIo, RoundTrip) {
  SeededRng synth(7, streams::kSynthesis);
  auto d = synth_dataset(3, 4, GridShape{4, 3, 2}, 0.6, synth);
  d.samples[5].label.reset();
  const auto bytes = encode_shard(d);
  EXPECT_EQ(bytes.size(), kShardHeaderBytes + d.size() * (24 * 4 + 1));
  EXPECT_EQ(decode_shard(bytes), d);
  const auto dir = scratch();
  write_shard(dir / "a.sfsd", d);
  EXPECT_EQ(read_shard(dir / "a.sfsd"), d);
  EXPECT_EQ(client_shard_name(3), client_shard_name(3));
  EXPECT_NE(client_shard_name(3), client_shard_name(4));
}

TEST(ShardIo, RejectsMalformed) {
  SeededRng synth(8, streams::kSynthesis);
  const auto d = synth_dataset(2, 2, GridShape{2, 2, 1}, 0.6, synth);
  const auto good = encode_shard(d);
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_shard(bad_magic), IoError);
  auto bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(decode_shard(bad_version), IoError);
  for (std::size_t n = 0; n < good.size(); ++n) {
    EXPECT_THROW(decode_shard(std::span(good.data(), n)), IoError) << n;
  }
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(decode_shard(trailing), IoError);
  auto bad_label = good;
  bad_label.back() = 7;  // num_classes is 2
  EXPECT_THROW(decode_shard(bad_label), IoError);
  EXPECT_THROW(read_shard(scratch() / "missing.sfsd"), IoError);
}

TEST(Metrics, RoundTrip) {
  std::vector<aggregation::RoundMetrics> rows{
      {1, 0.1 + 0.2, 0.75, 1.0 / 3.0, 1e-300, 12345.678, 99, 1024, 6, 1},
      {2, 1e10, 1.0, 0.0, 0.0, 0.0, 0, 0, 0, 0},
  };
  std::string csv(kMetricsHeader);
  csv += '\n';
  for (const auto &r : rows) csv += format_metrics_row(r) + "\n";
  EXPECT_EQ(parse_metrics(csv), rows);
  EXPECT_TRUE(parse_metrics(std::string(kMetricsHeader) + "\n").empty());
  EXPECT_THROW(parse_metrics("nope\n"), IoError);
  EXPECT_THROW(parse_metrics(std::string(kMetricsHeader) + "\n1,2\n"), IoError);
}

TEST(Metrics, AtomicWriteReplacesContent) {
  const auto dir = scratch();
  write_file_atomic(dir / "f.txt", "first");
  write_file_atomic(dir / "f.txt", "second");
  EXPECT_EQ(read_file(dir / "f.txt"), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(write_file_atomic(dir / "no" / "such" / "f.txt", "x"), IoError);
  EXPECT_THROW(read_file(dir / "absent.txt"), IoError);
}

boost::property_tree::ptree parse_svg(const std::string &svg) {
  std::istringstream in(svg);
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

TEST(Plot, SvgIsWellFormedWithOneSegmentPerSeries) {
  Chart chart{"acc <&>", "round", "value", {1.0, 2.0},
              {{"a", {0.5, 0.75}}, {"b", {0.25, 1.0}}}};
  const auto tree = parse_svg(render_svg(chart));
  const auto &svg = tree.get_child("svg");
  int polylines = 0;
  for (const auto &[name, child] : svg) {
    if (name != "polyline") continue;
    ++polylines;
    const auto points = child.get<std::string>("<xmlattr>.points");
    EXPECT_EQ(std::count(points.begin(), points.end(), ','), 2) << points;
    EXPECT_EQ(std::count(points.begin(), points.end(), ' '), 1) << points;
  }
  EXPECT_EQ(polylines, 2);
  EXPECT_EQ(svg.get<std::string>("title"), "acc <&>");
}

TEST(Plot, AxisExtentsPadDataExtents) {
  Chart chart{"t", "x", "y", {1.0, 2.0, 11.0}, {{"s", {-4.0, 6.0, 0.0}}}};
  const auto svg = parse_svg(render_svg(chart)).get_child("svg");
  EXPECT_DOUBLE_EQ(svg.get<double>("<xmlattr>.data-x-min"), 1.0 - 0.5);
  EXPECT_DOUBLE_EQ(svg.get<double>("<xmlattr>.data-x-max"), 11.0 + 0.5);
  EXPECT_DOUBLE_EQ(svg.get<double>("<xmlattr>.data-y-min"), -4.0 - 0.5);
  EXPECT_DOUBLE_EQ(svg.get<double>("<xmlattr>.data-y-max"), 6.0 + 0.5);
  // Every vertex lies inside the plotting frame.
  for (const auto &[name, child] : svg) {
    if (name != "polyline") continue;
    std::istringstream pts(child.get<std::string>("<xmlattr>.points"));
    std::string pair;
    while (pts >> pair) {
      const double x = std::stod(pair.substr(0, pair.find(',')));
      const double y = std::stod(pair.substr(pair.find(',') + 1));
      EXPECT_GT(x, kPlotLeft);
      EXPECT_LT(x, kPlotLeft + kPlotWidth);
      EXPECT_GT(y, kPlotTop);
      EXPECT_LT(y, kPlotTop + kPlotHeight);
    }
  }
}

TEST(Plot, DegenerateRangesStayFinite) {
  EXPECT_EQ(axis_range(0.0, 0.0), (std::pair{-1.0, 1.0}));
  EXPECT_EQ(axis_range(2.0, 2.0), (std::pair{1.9, 2.1}));
  Chart single{"t", "x", "y", {1.0}, {{"s", {3.0}}}};
  const auto svg = render_svg(single);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Plot, EmitWritesFourChartsOrNone) {
  const auto dir = scratch();
  EXPECT_TRUE(emit_plots({}, dir).empty());
  EXPECT_TRUE(fs::is_empty(dir));
  std::vector<aggregation::RoundMetrics> rows{{1, 1.0, 0.5, 1.0, 1.0, 1.0, 10, 10, 2, 0},
                                              {2, 2.0, 0.6, 0.9, 1.0, 1.0, 10, 0, 2, 0}};
  const auto paths = emit_plots(rows, dir);
  ASSERT_EQ(paths.size(), 4u);
  for (const auto &p : paths) {
    EXPECT_TRUE(fs::exists(p));
    EXPECT_NO_THROW(parse_svg(read_file(p)));
  }
}

TEST(RunExperiment, ZeroRoundsWritesHeaderOnly) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", tiny_config_text(0));
  RunOptions opts;
  opts.out_dir = dir / "out";
  std::string err;
  ASSERT_EQ(run_experiment(dir / "cfg.txt", opts, &err), kExitOk) << err;
  EXPECT_EQ(read_file(dir / "out" / "metrics.csv"), std::string(kMetricsHeader) + "\n");
  EXPECT_FALSE(fs::exists(dir / "out" / "accuracy.svg"));
}

TEST(RunExperiment, ExitCodes) {
  const auto dir = scratch();
  RunOptions opts;
  opts.out_dir = dir / "out";
  std::string err;
  write_text(dir / "bad.txt", "selection_rate = 1.5\n");
  EXPECT_EQ(run_experiment(dir / "bad.txt", opts, &err), kExitConfig);
  EXPECT_NE(err.find("selection rate"), std::string::npos) << err;
  write_text(dir / "unknown.txt", "no_such_key = 1\n");
  EXPECT_EQ(run_experiment(dir / "unknown.txt", opts, &err), kExitConfig);
  EXPECT_EQ(run_experiment(dir / "missing.txt", opts, &err), kExitIo);
  write_text(dir / "ok.txt", tiny_config_text(1));
  write_text(dir / "blocker", "file in the way");
  opts.out_dir = dir / "blocker" / "sub";
  EXPECT_EQ(run_experiment(dir / "ok.txt", opts, &err), kExitIo);
  opts.out_dir = dir / "out";
  opts.overrides = {"num_clusters=99"};
  EXPECT_EQ(run_experiment(dir / "ok.txt", opts, &err), kExitConfig);
}

TEST(RunExperiment, OutputsAreByteIdentical) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", tiny_config_text(3));
  for (const char *sub : {"a", "b"}) {
    RunOptions opts;
    opts.out_dir = dir / sub;
    opts.overrides = {"dump_updates=true"};
    ASSERT_EQ(run_experiment(dir / "cfg.txt", opts), kExitOk);
  }
  for (const char *f : {"metrics.csv", "events.csv", "clusters.csv", "updates.bin",
                        "config.txt", "accuracy.svg"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
  EXPECT_EQ(parse_metrics(read_file(dir / "a" / "metrics.csv")).size(), 3u);
}

TEST(RunExperiment, StopAtAccuracyEndsEarly) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", tiny_config_text(10));
  RunOptions opts;
  opts.out_dir = dir;
  opts.stop_at_accuracy = 0.01;
  opts.plots = false;
  ASSERT_EQ(run_experiment(dir / "cfg.txt", opts), kExitOk);
  EXPECT_EQ(parse_metrics(read_file(dir / "metrics.csv")).size(), 1u);
}

TEST(RunExperiment, DefaultConfigFinishesInTime) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", "# defaults\n");
  RunOptions opts;
  opts.out_dir = dir;
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(run_experiment(dir / "cfg.txt", opts), kExitOk);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
  EXPECT_EQ(parse_metrics(read_file(dir / "metrics.csv")).size(), 200u);
}

int run_cli(const std::string &args, const fs::path &stdout_path) {
  const std::string cmd = std::string("\"") + ORBITFL_CLI_PATH + "\" " + args + " > \"" +
                          stdout_path.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, Subcommands) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", tiny_config_text(2));
  const auto log = dir / "log.txt";
  const std::string cfg = "\"" + (dir / "cfg.txt").string() + "\"";

  ASSERT_EQ(run_cli("run " + cfg + " -o \"" + (dir / "run").string() + "\"", log), 0)
      << read_file(log);
  EXPECT_EQ(parse_metrics(read_file(dir / "run" / "metrics.csv")).size(), 2u);

  ASSERT_EQ(run_cli("inspect clusters -c " + cfg, log), 0) << read_file(log);
  const auto csv = read_file(log);
  EXPECT_EQ(csv.rfind("client_id,cluster,is_ps\n", 0), 0u);
  const auto rows = testing::csv_rows(csv);
  ASSERT_EQ(rows.size(), 8u);
  int ps = 0;
  for (const auto &r : rows) ps += r[2] == "1";
  EXPECT_EQ(ps, 2);

  ASSERT_EQ(run_cli("partition -c " + cfg + " -o \"" + (dir / "shards").string() + "\"", log),
            0)
      << read_file(log);
  EXPECT_EQ(read_shard(dir / "shards" / kEvalShardName).size(), 40u);
  EXPECT_EQ(read_shard(dir / "shards" / client_shard_name(7)).num_classes, 4);

  ASSERT_EQ(run_cli("plot \"" + (dir / "run" / "metrics.csv").string() + "\" -o \"" +
                        (dir / "plots").string() + "\"",
                    log),
            0)
      << read_file(log);
  EXPECT_TRUE(fs::exists(dir / "plots" / "loss.svg"));

  EXPECT_EQ(run_cli("run \"" + (dir / "absent.txt").string() + "\"", log), kExitIo);
  write_text(dir / "bad.txt", "num_clusters = 0\n");
  EXPECT_EQ(run_cli("inspect clusters -c \"" + (dir / "bad.txt").string() + "\"", log),
            kExitConfig);
  EXPECT_NE(run_cli("", log), 0);
}

TEST(Cli, ReadsPartitionedShards) {
  const auto dir = scratch();
  write_text(dir / "cfg.txt", tiny_config_text(1));
  const auto log = dir / "log.txt";
  const std::string cfg = "\"" + (dir / "cfg.txt").string() + "\"";
  ASSERT_EQ(run_cli("partition -c " + cfg + " -o \"" + (dir / "shards").string() + "\"", log),
            0);
  ASSERT_EQ(run_cli("run " + cfg + " --no-plots --override data_dir=" +
                        (dir / "shards").string() + " -o \"" + (dir / "a").string() + "\"",
                    log),
            0)
      << read_file(log);
  ASSERT_EQ(run_cli("run " + cfg + " --no-plots -o \"" + (dir / "b").string() + "\"", log), 0);
  EXPECT_EQ(read_file(dir / "a" / "metrics.csv"), read_file(dir / "b" / "metrics.csv"));
}

}  // namespace
}  // namespace orbitfl::harness
