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
#include <benchmark/benchmark.h>

#include <cmath>

#include "orbitfl/aggregation/orchestrator.h"
#include "orbitfl/clustering/clustering.h"
#include "orbitfl/compression/codec.h"
#include "orbitfl/harness/dataset.h"

namespace {

using namespace orbitfl;

ModelVector wave(std::size_t dim) {
  ModelVector v(dim);
  for (std::size_t j = 0; j < dim; ++j) v[j] = std::sin(0.37 * static_cast<double>(j)) + 0.01;
  return v;
}

void BM_CompressEncodeDecode(benchmark::State &st) {
  const auto dim = static_cast<std::size_t>(st.range(0));
  const auto v = wave(dim);
  const ModelVector prev(dim);
  SeededRng rng(1, streams::codec(0));
  for (auto _ : st) {
    const auto wire = compression::encode_wire(compression::compress(v, prev, 0.125, 0.01, rng));
    benchmark::DoNotOptimize(compression::decode(compression::decode_wire(wire)));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(dim));
}
BENCHMARK(BM_CompressEncodeDecode)->Arg(2212)->Arg(1 << 16);

void BM_Kmeans(benchmark::State &st) {
  const int n = static_cast<int>(st.range(0));
  std::vector<clustering::FeatureVector> features;
  SeededRng gen(2, streams::kClustering);
  for (int i = 0; i < n; ++i) {
    clustering::FeatureVector f(2 * n);
    for (auto &x : f) x = gen.uniform();
    features.push_back(std::move(f));
  }
  for (auto _ : st) {
    SeededRng rng(3, streams::kClustering);
    benchmark::DoNotOptimize(clustering::kmeans_cluster(features, 4, rng));
  }
}
BENCHMARK(BM_Kmeans)->Arg(20)->Arg(100);

void BM_LocalTrain(benchmark::State &st) {
  ExperimentConfig cfg;
  cfg.rounds = 1;
  const auto state = aggregation::make_initial_state(cfg, harness::make_bundle(cfg));
  const auto &client = state.clients[0];
  auto opts = state.train;
  opts.confidence = 0.3;  // keep the shard so the epoch actually runs
  SeededRng rng(4, streams::client(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        learner::local_train(state.model, state.global_model, *client.dataset, opts, rng));
  }
}
BENCHMARK(BM_LocalTrain)->Unit(benchmark::kMillisecond);

void BM_Round(benchmark::State &st) {
  ExperimentConfig cfg;
  auto state = aggregation::make_initial_state(cfg, harness::make_bundle(cfg));
  for (auto _ : st) benchmark::DoNotOptimize(aggregation::run_round(state));
}
BENCHMARK(BM_Round)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
