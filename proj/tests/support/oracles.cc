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
#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "orbitfl/harness/dataset.h"
#include "orbitfl/learner/semi_supervised.h"

namespace orbitfl::testing {

ModelVector fixed_vector(std::size_t dim) {
  ModelVector v(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double t = static_cast<double>(j);
    const double sign = (j % 3 == 1) ? -1.0 : 1.0;
    v[j] = sign * (0.05 + std::abs(std::sin(0.37 * t + 0.1)) *
                              std::pow(10.0, std::fmod(0.13 * t, 2.0) - 1.0));
  }
  return v;
}

double kepler_period(double altitude_km) {
  const double a = 6371.0e3 + altitude_km * 1e3;
  return 2.0 * 3.14159265358979323846 * std::sqrt(a * a * a / 3.986004418e14);
}

std::size_t wire_size_oracle(std::size_t kept, int bit_width) {
  const std::size_t header = 4 + 1 + 4 + 4 + 1 + 4 + 4 + 4;
  const std::size_t bits = kept * (32 + static_cast<std::size_t>(bit_width));
  return header + bits / 8 + (bits % 8 != 0 ? 1 : 0);
}

TwoPartition best_two_partition(const std::vector<std::vector<double>> &points) {
  const std::size_t n = points.size();
  if (n < 2 || n > 20) throw std::invalid_argument("best_two_partition: 2..20 points");
  const std::size_t dim = points[0].size();
  TwoPartition best;
  best.cost = std::numeric_limits<double>::infinity();
  // Point 0 always in part 0; enumerate the rest.
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> labels(n, 0);
    for (std::size_t i = 1; i < n; ++i) labels[i] = (mask >> (i - 1)) & 1u;
    double cost = 0.0;
    for (int part = 0; part < 2; ++part) {
      std::vector<double> mean(dim, 0.0);
      int count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != part) continue;
        for (std::size_t t = 0; t < dim; ++t) mean[t] += points[i][t];
        ++count;
      }
      for (double &x : mean) x /= count;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != part) continue;
        for (std::size_t t = 0; t < dim; ++t) {
          cost += (points[i][t] - mean[t]) * (points[i][t] - mean[t]);
        }
      }
    }
    if (cost < best.cost) {
      best.cost = cost;
      best.labels = labels;
    }
  }
  return best;
}

double variance_oracle(const ModelVector &v, std::size_t kept, int bit_width,
                       int subsets, std::uint64_t seed) {
  const std::size_t d = v.size();
  const double ratio = static_cast<double>(d) / static_cast<double>(kept);
  const double levels = std::pow(2.0, bit_width - 1) - 1.0;
  double v_sq = 0.0;
  for (double x : v) v_sq += x * x;

  std::mt19937_64 gen(seed);
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  double quant_sum = 0.0;
  for (int s = 0; s < subsets; ++s) {
    std::shuffle(idx.begin(), idx.end(), gen);
    double u_sq = 0.0;
    for (std::size_t t = 0; t < kept; ++t) {
      const double u = v[idx[t]] * ratio;
      u_sq += u * u;
    }
    const double norm = std::sqrt(u_sq);
    float s32 = static_cast<float>(norm);
    if (static_cast<double>(s32) < norm) {
      s32 = std::nextafter(s32, std::numeric_limits<float>::infinity());
    }
    const double step = static_cast<double>(s32) / levels;
    double q = 0.0;
    for (std::size_t t = 0; t < kept; ++t) {
      const double x = std::abs(v[idx[t]] * ratio) / static_cast<double>(s32) * levels;
      const double f = x - std::floor(x);
      q += step * step * f * (1.0 - f);
    }
    quant_sum += q;
  }
  const double sparsify_part = (ratio - 1.0) * v_sq;
  return (sparsify_part + quant_sum / subsets) / v_sq;
}

std::map<std::string, std::string> read_fixture(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return out;
}

double centralized_accuracy(const ExperimentConfig &cfg, int epochs) {
  auto data = harness::prepare_synthetic(cfg);
  Dataset train = data.partition.gs_labeled;
  for (std::size_t c = 0; c < data.partition.clients.size(); ++c) {
    for (std::size_t j = 0; j < data.partition.clients[c].size(); ++j) {
      Sample s = data.partition.clients[c].samples[j];
      s.label = data.partition.client_truth[c][j];
      train.samples.push_back(std::move(s));
    }
  }
  const auto arch = aggregation::architecture_for(cfg, train.shape, train.num_classes);
  learner::ModelSubstrate model(arch);
  SeededRng init(cfg.seed, streams::kModelInit);
  ModelVector w = model.initialize(init);

  // Plain SGD with momentum written out here, no augmentation.
  std::vector<double> velocity(w.size(), 0.0);
  std::mt19937_64 gen(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::vector<double>> targets;
  for (const auto &s : train.samples) {
    std::vector<double> t(train.num_classes, 0.0);
    t[*s.label] = 1.0;
    targets.push_back(std::move(t));
  }
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), gen);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<learner::Example> batch;
      for (std::size_t t = start; t < end; ++t) {
        batch.push_back({train.samples[order[t]].features, targets[order[t]]});
      }
      ModelVector g;
      model.loss_and_gradient(w, batch, &g);
      for (std::size_t i = 0; i < w.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] + g[i];
        w[i] -= cfg.learning_rate * velocity[i];
      }
    }
  }
  std::size_t correct = 0;
  for (const auto &s : data.eval.samples) {
    const auto p = model.predict(w, s.features);
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    if (best == *s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.eval.size());
}

std::vector<std::vector<std::string>> csv_rows(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::vector<ReplayedRound> replay_logs(std::string_view events_csv,
                                       std::string_view clusters_csv) {
  struct Client {
    double t_cmp, t_com, e_tx, e_cmp;
    std::uint64_t bits;
    bool participated;
  };
  std::map<int, std::map<int, Client>> events;  // round -> id -> row
  for (const auto &f : csv_rows(events_csv)) {
    Client c{std::strtod(f.at(2).c_str(), nullptr), std::strtod(f.at(3).c_str(), nullptr),
             std::strtod(f.at(5).c_str(), nullptr), std::strtod(f.at(6).c_str(), nullptr),
             std::strtoull(f.at(4).c_str(), nullptr, 10), f.at(7) == "1"};
    events[std::stoi(f.at(0))][std::stoi(f.at(1))] = c;
  }
  std::map<int, ReplayedRound> rounds;
  for (const auto &[m, clients] : events) {
    ReplayedRound r;
    r.round = m;
    for (const auto &[id, c] : clients) {  // ascending id
      r.e_tx += c.e_tx;
      r.e_cmp += c.e_cmp;
      r.bits_up += c.bits;
      if (c.participated) ++r.participants;
      if (c.bits > 0) ++r.uploads;
    }
    rounds[m] = r;
  }
  for (const auto &f : csv_rows(clusters_csv)) {
    const int m = std::stoi(f.at(0));
    std::vector<int> members;
    std::istringstream ms(f.at(3));
    for (int id; ms >> id;) members.push_back(id);
    const double t_sk = std::strtod(f.at(4).c_str(), nullptr);
    const double t_broc = std::strtod(f.at(5).c_str(), nullptr);
    bool any = false;
    double slowest = 0.0;
    for (int id : members) {
      const Client &c = events.at(m).at(id);
      if (!c.participated) continue;
      const double t = c.t_cmp + c.t_com;
      slowest = any ? std::max(slowest, t) : t;
      any = true;
    }
    if (any) rounds[m].t_c += slowest + t_sk + t_broc;
  }
  std::vector<ReplayedRound> out;
  for (auto &[m, r] : rounds) out.push_back(r);
  return out;
}

std::vector<ModelVector> fedavg_trajectory(aggregation::SimulationState state,
                                           int rounds) {
  std::vector<ModelVector> out;
  ModelVector w = state.global_model;
  for (int m = 1; m <= rounds; ++m) {
    learner::gs_train(state.model, w, *state.gs.labeled_dataset,
                      state.cfg.gs_epochs, state.cfg.batch_size,
                      state.train.policy, state.gs_optimizer, state.gs_rng);
    std::vector<ModelVector> locals;
    std::vector<double> sizes;
    for (auto &c : state.clients) {
      auto res = learner::local_train(state.model, w, *c.dataset, state.train, c.rng);
      if (res.skipped) continue;
      ModelVector local(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) local[i] = w[i] + res.delta[i];
      locals.push_back(std::move(local));
      sizes.push_back(static_cast<double>(c.dataset->size()));
    }
    if (!locals.empty()) {
      const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
      ModelVector next(w.size());
      for (std::size_t k = 0; k < locals.size(); ++k) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          next[i] += sizes[k] / total * locals[k][i];
        }
      }
      w = std::move(next);
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace orbitfl::testing
