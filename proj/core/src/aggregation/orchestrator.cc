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
#include "orbitfl/aggregation/orchestrator.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "orbitfl/compression/codec.h"
#include "orbitfl/constellation/orbit.h"

namespace orbitfl::aggregation {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool) t.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Per-client outcome of the training phase.
struct ClientWork {
  bool has_link = false;
  bool computed = false;
  bool skipped = true;  // no usable update this round
  std::size_t samples = 0;
  ModelVector update;  // what the PS aggregates
  std::uint64_t bits = 0;
  std::vector<std::uint8_t> wire;
  double rate_bps = 0.0;
  double t_cmp_s = 0.0;
  double t_com_s = 0.0;
};

double comp_load(const ClientState &c) {
  return constellation::comp_time(static_cast<double>(c.data_size()),
                                  c.cycles_per_sample, c.cpu_freq_hz);
}

void cluster_on(SimulationState &state, const std::vector<Vec3> &positions) {
  const auto &cfg = state.cfg;
  std::vector<ModelVector> updates;
  std::vector<double> loads;
  updates.reserve(state.clients.size());
  for (const auto &c : state.clients) {
    updates.push_back(c.latest_update);
    loads.push_back(comp_load(c));
  }
  const auto h_cos = clustering::gradient_similarity(updates);
  const auto h_geo = clustering::geo_similarity(positions);
  const auto features =
      clustering::joint_features(h_cos, h_geo, cfg.cluster_weight);
  state.clusters = clustering::kmeans_cluster(
      features, cfg.num_clusters, state.clustering_rng, cfg.kmeans_max_iters);
  clustering::elect_parameter_servers(state.clusters, positions, loads);
  state.gs.attached_ps_ids = state.clusters.ps_ids;
  state.cluster_models.assign(cfg.num_clusters, state.global_model);
  state.history.assign(cfg.num_clusters, {});
}

}  // namespace

SimulationState::SimulationState(const ExperimentConfig &config,
                                 learner::Architecture arch)
    : cfg(config),
      model(arch),
      train(train_options(config)),
      noise_w_hz(dbm_per_hz_to_watts_per_hz(config.noise_density_dbm_hz)),
      gs_optimizer(config.learning_rate, config.momentum,
                   learner::ModelSubstrate(arch).parameter_count()),
      gs_rng(config.seed, streams::kGroundStation),
      clustering_rng(config.seed, streams::kClustering) {}

learner::Architecture architecture_for(const ExperimentConfig &cfg,
                                       const GridShape &shape,
                                       int num_classes) {
  learner::Architecture arch;
  arch.input_dim = static_cast<int>(shape.size());
  arch.hidden = cfg.model == "logistic" ? 0 : cfg.hidden_units;
  arch.classes = num_classes;
  return arch;
}

learner::TrainOptions train_options(const ExperimentConfig &cfg) {
  learner::TrainOptions t;
  t.epochs = cfg.local_epochs;
  t.batch_size = cfg.batch_size;
  t.confidence = cfg.confidence;
  t.beta_param = cfg.beta_param;
  t.loss_weight = cfg.loss_weight;
  t.learning_rate = cfg.learning_rate;
  t.momentum = cfg.momentum;
  t.policy.flip_prob = cfg.flip_prob;
  t.policy.shift_fraction = cfg.shift_fraction;
  t.policy.noise_scale = cfg.noise_scale;
  t.policy.cutout_fraction = cfg.cutout_fraction;
  return t;
}

std::vector<Vec3> client_positions(const SimulationState &state, double t) {
  std::vector<Vec3> out;
  out.reserve(state.clients.size());
  for (const auto &c : state.clients) {
    out.push_back(constellation::propagate(c.slot, t));
  }
  return out;
}

SimulationState make_initial_state(const ExperimentConfig &cfg,
                                   const DataBundle &data) {
  if (!data.gs_labeled || data.gs_labeled->empty()) {
    throw std::invalid_argument("make_initial_state: empty GS labeled shard");
  }
  if (static_cast<int>(data.client_shards.size()) != cfg.num_clients) {
    throw std::invalid_argument("make_initial_state: shard count != num_clients");
  }
  const Dataset &labeled = *data.gs_labeled;
  SimulationState state(
      cfg, architecture_for(cfg, labeled.shape, labeled.num_classes));
  state.eval = data.eval;

  state.gs.id = 0;
  state.gs.lat_deg = cfg.gs_lat_deg;
  state.gs.lon_deg = cfg.gs_lon_deg;
  state.gs.labeled_dataset = data.gs_labeled;

  const auto slots = constellation::walker_constellation(
      cfg.num_clients, cfg.num_planes, cfg.altitude_km, cfg.inclination_deg);
  SeededRng hardware(cfg.seed, streams::kConstellation);
  const double tx_power = dbw_to_watts(cfg.tx_power_dbw);
  for (int i = 0; i < cfg.num_clients; ++i) {
    const auto &shard = data.client_shards[i];
    if (!shard || shard->shape != labeled.shape ||
        shard->num_classes != labeled.num_classes) {
      throw std::invalid_argument("make_initial_state: shard layout mismatch");
    }
    ClientState c;
    c.id = i;
    c.orbit_plane = i % std::min(cfg.num_planes, cfg.num_clients);
    c.slot = slots[i];
    c.dataset = shard;
    c.cpu_freq_hz = cfg.cpu_freq_hz * hardware.uniform(1.0 - cfg.cpu_freq_spread,
                                                       1.0 + cfg.cpu_freq_spread);
    c.cycles_per_sample = cfg.cycles_per_sample;
    c.bandwidth_hz = cfg.bandwidth_hz;
    c.tx_power_w = tx_power;
    c.rng = SeededRng(cfg.seed, streams::client(i));
    c.codec_rng = SeededRng(cfg.seed, streams::codec(i));
    state.clients.push_back(std::move(c));
  }

  SeededRng init(cfg.seed, streams::kModelInit);
  state.global_model = state.model.initialize(init);
  const std::size_t dim = state.global_model.size();
  for (auto &c : state.clients) {
    c.local_model = state.global_model;
    c.previous_update = ModelVector(dim);
    c.latest_update = ModelVector(dim);
  }

  // Warm-up: the GS trains first so the seed updates carry signal, then
  // every client runs one epoch that keeps all of its pseudo-labels.
  learner::gs_train(state.model, state.global_model, labeled, cfg.gs_epochs,
                    cfg.batch_size, state.train.policy, state.gs_optimizer,
                    state.gs_rng);
  learner::TrainOptions warm = state.train;
  warm.epochs = 1;
  warm.confidence = 0.5 / labeled.num_classes;
  parallel_for(state.clients.size(), cfg.threads, [&](std::size_t i) {
    auto &c = state.clients[i];
    auto res = learner::local_train(state.model, state.global_model, *c.dataset,
                                    warm, c.rng);
    c.latest_update = std::move(res.delta);
  });

  cluster_on(state, client_positions(state, 0.0));
  return state;
}

void recluster(SimulationState &state) {
  cluster_on(state, client_positions(state, state.sim_time_s));
}

RoundRecord run_round(SimulationState &state) {
  const auto &cfg = state.cfg;
  const int m = ++state.round;
  const int num_clusters = state.clusters.num_clusters();
  const std::size_t dim = state.global_model.size();
  const double dense_bits = 32.0 * static_cast<double>(dim);

  if (cfg.recluster_interval > 0 && m > 1 &&
      (m - 1) % cfg.recluster_interval == 0) {
    recluster(state);
  }
  const auto positions = client_positions(state, state.sim_time_s);
  const auto &labels = state.clusters.labels;
  const auto &ps_ids = state.clusters.ps_ids;

  // GS supervised epochs, then broadcast GS -> PS -> members.
  const bool broadcast = (m - 1) % cfg.gs_interval == 0;
  if (broadcast) {
    learner::gs_train(state.model, state.global_model,
                      *state.gs.labeled_dataset, cfg.gs_epochs, cfg.batch_size,
                      state.train.policy, state.gs_optimizer, state.gs_rng);
    state.cluster_models.assign(num_clusters, state.global_model);
  }

  // Client training and compression. Each client touches only its own
  // record and RNG streams.
  std::vector<ClientWork> work(state.clients.size());
  parallel_for(state.clients.size(), cfg.threads, [&](std::size_t i) {
    ClientState &c = state.clients[i];
    ClientWork &w = work[i];
    const int k = labels[i];
    const int ps = ps_ids[k];
    const bool is_ps = c.id == ps;
    w.has_link = is_ps || !cfg.require_line_of_sight ||
                 constellation::has_line_of_sight(positions[i], positions[ps]);
    if (!w.has_link) return;

    const ModelVector &base = state.cluster_models[k];
    auto res = learner::local_train(state.model, base, *c.dataset, state.train,
                                    c.rng);
    w.computed = true;
    w.samples = res.samples_processed;
    w.t_cmp_s = constellation::comp_time(static_cast<double>(w.samples),
                                         c.cycles_per_sample, c.cpu_freq_hz);
    if (res.skipped) return;
    w.skipped = false;

    c.local_model = base;
    axpy(1.0, res.delta, c.local_model);
    if (is_ps) {
      w.update = res.delta;  // aggregated in place, nothing on the link
    } else {
      if (cfg.compression) {
        const auto cu = compression::compress(
            res.delta, c.previous_update, cfg.sparsity_ratio,
            cfg.gradient_threshold, c.codec_rng, static_cast<std::uint32_t>(c.id),
            static_cast<std::uint32_t>(m));
        w.update = compression::decode(cu);
        w.wire = compression::encode_wire(cu);
        w.bits = 8ull * w.wire.size();
      } else {
        w.update = res.delta;
        w.bits = static_cast<std::uint64_t>(dense_bits);
      }
      w.rate_bps = constellation::link_budget(positions[i], positions[ps],
                                              c.bandwidth_hz, c.tx_power_w,
                                              state.noise_w_hz, cfg.carrier_hz)
                       .rate_bps;
      w.t_com_s = constellation::comm_time(static_cast<double>(w.bits), w.rate_bps);
    }
    c.previous_update = res.delta;
    c.latest_update = std::move(res.delta);
    c.completion_time_s = w.t_cmp_s + w.t_com_s;
  });

  RoundRecord rec;
  rec.metrics.round = m;
  rec.events.resize(state.clients.size());
  std::vector<bool> uploaded(state.clients.size(), false);
  std::vector<constellation::ClusterTiming> timings;

  for (int k = 0; k < num_clusters; ++k) {
    const auto members = state.clusters.members(k);
    const int ps = ps_ids[k];

    std::vector<Completion> finished;
    for (int id : members) {
      if (!work[id].skipped) {
        finished.push_back({id, work[id].t_cmp_s + work[id].t_com_s});
      }
    }
    auto &hist = state.history[k];
    std::vector<std::vector<double>> past(hist.begin(), hist.end());
    ParticipantSet chosen = select_participants(
        m, k, finished, cfg.selection_rate, static_cast<int>(members.size()),
        past);
    std::vector<double> now;
    for (const auto &f : finished) now.push_back(f.time_s);
    hist.push_back(std::move(now));
    while (static_cast<int>(hist.size()) > cfg.selection_window - 1) {
      hist.pop_front();
    }

    // PS -> member broadcast over the weakest visible link.
    double min_rate = std::numeric_limits<double>::infinity();
    for (int id : members) {
      if (id == ps) continue;
      if (cfg.require_line_of_sight &&
          !constellation::has_line_of_sight(positions[ps], positions[id])) {
        continue;
      }
      const auto &p = state.clients[ps];
      min_rate = std::min(min_rate, constellation::link_budget(
                                        positions[ps], positions[id],
                                        p.bandwidth_hz, p.tx_power_w,
                                        state.noise_w_hz, cfg.carrier_hz)
                                        .rate_bps);
    }
    const double t_broc = std::isinf(min_rate)
                              ? 0.0
                              : constellation::comm_time(dense_bits, min_rate);

    constellation::ClusterRow row;
    row.round = m;
    row.cluster = k;
    row.ps_id = ps;
    row.members = members;
    row.aggregation_delay_s = cfg.aggregation_delay_s;
    row.broadcast_s = t_broc;
    rec.clusters.push_back(row);

    if (!chosen.client_ids.empty()) {
      std::vector<Contribution> parts;
      constellation::ClusterTiming timing;
      timing.cluster = k;
      timing.aggregation_delay_s = cfg.aggregation_delay_s;
      timing.broadcast_s = t_broc;
      for (int id : chosen.client_ids) {
        ClientState &c = state.clients[id];
        const int phi =
            cfg.staleness_weighting ? staleness(m, c.last_participation_round) : 1;
        parts.push_back({id, static_cast<double>(c.data_size()), phi,
                         &work[id].update});
        c.last_participation_round = m;
        uploaded[id] = work[id].bits > 0;
        timing.participant_times_s.push_back(work[id].t_cmp_s + work[id].t_com_s);
      }
      state.cluster_models[k] = intra_cluster_aggregate(
          state.cluster_models[k], parts, cfg.normalize_weights);
      timings.push_back(std::move(timing));
      rec.metrics.participants += static_cast<int>(chosen.client_ids.size());
    }
    rec.participants.push_back(std::move(chosen));
  }

  if (m % cfg.gs_interval == 0) {
    std::vector<double> sizes(num_clusters, 0.0);
    for (const auto &c : state.clients) {
      sizes[labels[c.id]] += static_cast<double>(c.data_size());
    }
    state.global_model = gs_aggregate(state.cluster_models, sizes);
  }

  // Accounting, ascending client id.
  std::vector<constellation::ClientEnergy> energy;
  for (std::size_t i = 0; i < state.clients.size(); ++i) {
    const ClientState &c = state.clients[i];
    const ClientWork &w = work[i];
    constellation::ClientEnergy ce;
    ce.client_id = c.id;
    ce.tx_power_w = c.tx_power_w;
    ce.bits_up = uploaded[i] ? static_cast<double>(w.bits) : 0.0;
    ce.rate_bps = w.rate_bps;
    ce.cpu_freq_hz = c.cpu_freq_hz;
    ce.t_cmp_s = w.t_cmp_s;
    energy.push_back(ce);

    auto &ev = rec.events[i];
    ev.round = m;
    ev.client_id = c.id;
    ev.t_cmp_s = w.t_cmp_s;
    ev.t_com_s = w.t_com_s;
    ev.bits_up = uploaded[i] ? w.bits : 0;
    ev.e_tx_j = constellation::tx_energy(ce.tx_power_w, ce.bits_up, ce.rate_bps);
    ev.e_cmp_j = constellation::cmp_energy(cfg.energy_coefficient, ce.cpu_freq_hz,
                                           ce.t_cmp_s);
    ev.participated = c.last_participation_round == m;

    if (w.skipped) {
      ++rec.metrics.skipped;
      rec.skipped_ids.push_back(c.id);
    }
    if (uploaded[i]) {
      rec.metrics.bytes_up += w.bits / 8;
      if (!w.wire.empty()) rec.wire.push_back(w.wire);
    }
  }
  rec.energy = constellation::energy_report(energy, cfg.energy_coefficient);
  rec.time = constellation::round_time(timings);

  rec.metrics.wall_clock_s = rec.time.total_s;
  rec.metrics.e_tx_j = rec.energy.e_tx;
  rec.metrics.e_cmp_j = rec.energy.e_cmp;
  rec.metrics.bytes_down =
      broadcast ? static_cast<std::uint64_t>(num_clusters) * 2 * 4 * dim : 0;
  if (state.eval) {
    const auto ev = learner::evaluate(state.model, state.global_model, *state.eval);
    rec.metrics.accuracy = ev.accuracy;
    rec.metrics.loss = ev.loss;
  }
  state.sim_time_s += rec.time.total_s;
  return rec;
}

}  // namespace orbitfl::aggregation
