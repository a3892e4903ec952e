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
#include "orbitfl/harness/dataset.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "orbitfl/domain/error.h"
#include "orbitfl/harness/shard_io.h"

namespace orbitfl::harness {

namespace {

std::vector<double> make_prototype(const GridShape &shape, double separation,
                                   SeededRng &rng) {
  const int h = shape.height;
  const int w = shape.width;
  const int ch = shape.channels;
  auto at = [&](int r, int c, int k) {
    return (static_cast<std::size_t>(r) * w + c) * ch + k;
  };
  std::vector<double> raw(shape.size());
  for (double &v : raw) v = rng.normal();

  std::vector<double> sym(raw.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < ch; ++k) {
        sym[at(r, c, k)] = 0.5 * (raw[at(r, c, k)] + raw[at(r, w - 1 - c, k)]);
      }
    }
  }

  // 3x3 box blur with edge clamping; symmetric kernel keeps the mirror.
  std::vector<double> blur(raw.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < ch; ++k) {
        double acc = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = std::clamp(r + dr, 0, h - 1);
            const int cc = std::clamp(c + dc, 0, w - 1);
            acc += sym[at(rr, cc, k)];
          }
        }
        blur[at(r, c, k)] = acc / 9.0;
      }
    }
  }

  double sq = 0.0;
  for (double v : blur) sq += v * v;
  const double rms = std::sqrt(sq / static_cast<double>(blur.size()));
  for (double &v : blur) v = rms > 0.0 ? v * separation / rms : 0.0;
  return blur;
}

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset &data) {
  std::vector<std::vector<std::size_t>> out(data.num_classes);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto &label = data.samples[i].label;
    if (!label || *label < 0 || *label >= data.num_classes) {
      throw std::invalid_argument("dataset: every sample needs a valid label");
    }
    out[*label].push_back(i);
  }
  return out;
}

void shuffle(std::vector<std::size_t> &v, SeededRng &rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_int(i)]);
  }
}

Dataset empty_like(const Dataset &data) {
  Dataset out;
  out.shape = data.shape;
  out.num_classes = data.num_classes;
  return out;
}

}  // namespace

Dataset synth_dataset(int num_classes, int per_class, const GridShape &shape,
                      double separation, SeededRng &rng) {
  if (num_classes < 2) throw std::invalid_argument("synth_dataset: num_classes < 2");
  if (per_class < 0) throw std::invalid_argument("synth_dataset: per_class < 0");
  Dataset data;
  data.shape = shape;
  data.num_classes = num_classes;
  std::vector<std::vector<double>> prototypes;
  for (int c = 0; c < num_classes; ++c) {
    prototypes.push_back(make_prototype(shape, separation, rng));
  }
  data.samples.reserve(static_cast<std::size_t>(num_classes) * per_class);
  for (int c = 0; c < num_classes; ++c) {
    for (int n = 0; n < per_class; ++n) {
      Sample s;
      s.features.resize(shape.size());
      for (std::size_t j = 0; j < shape.size(); ++j) {
        s.features[j] = static_cast<float>(prototypes[c][j] + rng.normal());
      }
      s.label = c;
      data.samples.push_back(std::move(s));
    }
  }
  return data;
}

Split stratified_split(const Dataset &data, double fraction, SeededRng &rng) {
  auto by_class = indices_by_class(data);
  std::vector<bool> chosen(data.size(), false);
  for (auto &idx : by_class) {
    shuffle(idx, rng);
    const auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(idx.size())));
    for (std::size_t t = 0; t < std::min(take, idx.size()); ++t) chosen[idx[t]] = true;
  }
  Split out{empty_like(data), empty_like(data)};
  for (std::size_t i = 0; i < data.size(); ++i) {
    (chosen[i] ? out.selected : out.rest).samples.push_back(data.samples[i]);
  }
  return out;
}

Partition partition_noniid(const Dataset &data, int num_clients,
                           double labeled_fraction, double designated_fraction,
                           SeededRng &rng) {
  if (num_clients < 1) throw std::invalid_argument("partition: num_clients < 1");
  if (data.size() < static_cast<std::size_t>(num_clients) * 10) {
    throw std::invalid_argument(
        "partition: dataset too small (need at least 10 samples per client)");
  }
  const int classes = data.num_classes;
  Split split = stratified_split(data, labeled_fraction, rng);

  Partition out;
  out.gs_labeled = std::move(split.selected);
  auto pools = indices_by_class(split.rest);
  for (auto &p : pools) shuffle(p, rng);

  const std::size_t total = split.rest.size();
  const std::size_t base = total / num_clients;
  const std::size_t extra = total % num_clients;

  auto take_from = [&](int cls) -> std::size_t {
    int source = cls;
    if (pools[source].empty()) {
      source = 0;
      for (int c = 1; c < classes; ++c) {
        if (pools[c].size() > pools[source].size()) source = c;
      }
    }
    const std::size_t idx = pools[source].back();
    pools[source].pop_back();
    return idx;
  };

  for (int i = 0; i < num_clients; ++i) {
    const std::size_t size = base + (static_cast<std::size_t>(i) < extra ? 1 : 0);
    const int designated = i % classes;
    const auto n_des = static_cast<std::size_t>(
        std::llround(designated_fraction * static_cast<double>(size)));
    const std::size_t n_other = size - std::min(n_des, size);

    std::vector<std::size_t> quota(classes, 0);
    quota[designated] = std::min(n_des, size);
    if (classes > 1) {
      const std::size_t each = n_other / (classes - 1);
      std::size_t left = n_other % (classes - 1);
      for (int c = 0; c < classes; ++c) {
        if (c != designated) quota[c] = each;
      }
      // Leftover units go to the other classes starting after client i's
      // rotation offset, so no class is favored across clients.
      for (int step = 0; left > 0; ++step) {
        const int c = (designated + 1 + i / classes + step) % classes;
        if (c == designated) continue;
        ++quota[c];
        --left;
      }
    }

    Dataset shard = empty_like(data);
    std::vector<int> truth;
    for (int c = 0; c < classes; ++c) {
      for (std::size_t t = 0; t < quota[c]; ++t) {
        const std::size_t idx = take_from(c);
        Sample s = split.rest.samples[idx];
        truth.push_back(*s.label);
        s.label.reset();
        shard.samples.push_back(std::move(s));
      }
    }
    out.clients.push_back(std::move(shard));
    out.client_truth.push_back(std::move(truth));
  }
  return out;
}

PreparedData prepare_synthetic(const ExperimentConfig &cfg) {
  SeededRng synth_rng(cfg.seed, streams::kSynthesis);
  const Dataset all = synth_dataset(cfg.num_classes, cfg.samples_per_class,
                                    GridShape{}, cfg.separation, synth_rng);
  SeededRng part_rng(cfg.seed, streams::kPartitioner);
  Split held = stratified_split(all, cfg.eval_fraction, part_rng);
  PreparedData out;
  out.eval = std::move(held.selected);
  out.partition = partition_noniid(held.rest, cfg.num_clients,
                                   cfg.labeled_fraction,
                                   cfg.designated_fraction, part_rng);
  return out;
}

aggregation::DataBundle to_bundle(PreparedData data) {
  aggregation::DataBundle b;
  b.eval = std::make_shared<const Dataset>(std::move(data.eval));
  b.gs_labeled = std::make_shared<const Dataset>(std::move(data.partition.gs_labeled));
  for (auto &c : data.partition.clients) {
    b.client_shards.push_back(std::make_shared<const Dataset>(std::move(c)));
  }
  return b;
}

aggregation::DataBundle make_bundle(const ExperimentConfig &cfg) {
  if (cfg.data_dir.empty()) return to_bundle(prepare_synthetic(cfg));
  const std::filesystem::path dir = cfg.data_dir;
  aggregation::DataBundle b;
  b.gs_labeled = std::make_shared<const Dataset>(read_shard(dir / kGsShardName));
  b.eval = std::make_shared<const Dataset>(read_shard(dir / kEvalShardName));
  for (int i = 0; i < cfg.num_clients; ++i) {
    b.client_shards.push_back(
        std::make_shared<const Dataset>(read_shard(dir / client_shard_name(i))));
  }
  for (const Sample &s : b.gs_labeled->samples) {
    if (!s.label) throw IoError("gs shard contains unlabeled samples");
  }
  return b;
}

}  // namespace orbitfl::harness
