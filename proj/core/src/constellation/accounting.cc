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
#include "orbitfl/constellation/accounting.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "orbitfl/constellation/orbit.h"

namespace orbitfl::constellation {

double free_space_gain(double distance_m, double carrier_hz) {
  if (!(carrier_hz > 0.0)) {
    throw std::invalid_argument("free_space_gain: carrier must be > 0");
  }
  if (distance_m <= 0.0) return 1.0;
  const double amplitude =
      kSpeedOfLight / (4.0 * std::numbers::pi * distance_m * carrier_hz);
  return std::min(1.0, amplitude * amplitude);
}

double link_rate(double bandwidth_hz, double tx_power_w, double gain,
                 double noise_density_w_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("link_rate: bandwidth must be > 0");
  }
  if (!(noise_density_w_hz > 0.0)) {
    throw std::invalid_argument("link_rate: noise density must be > 0");
  }
  const double snr = tx_power_w * gain / noise_density_w_hz;
  return bandwidth_hz * std::log2(1.0 + snr);
}

LinkBudget link_budget(const Vec3 &from, const Vec3 &to, double bandwidth_hz,
                       double tx_power_w, double noise_density_w_hz,
                       double carrier_hz) {
  LinkBudget lb;
  lb.distance_m = distance(from, to);
  lb.gain = free_space_gain(lb.distance_m, carrier_hz);
  lb.rate_bps =
      link_rate(bandwidth_hz, tx_power_w, lb.gain, noise_density_w_hz);
  return lb;
}

double comp_time(double samples, double cycles_per_sample,
                 double cpu_freq_hz) {
  if (!(cpu_freq_hz > 0.0)) {
    throw std::invalid_argument("comp_time: cpu frequency must be > 0");
  }
  return samples * cycles_per_sample / cpu_freq_hz;
}

double comm_time(double payload_bits, double rate_bps) {
  if (!(rate_bps > 0.0)) {
    throw std::invalid_argument("comm_time: no usable link (rate <= 0)");
  }
  return payload_bits / rate_bps;
}

double cluster_time(std::span<const double> participant_times_s,
                    double aggregation_delay_s, double broadcast_s) {
  if (participant_times_s.empty()) {
    throw std::invalid_argument("cluster_time: empty participant set");
  }
  const double slowest = *std::max_element(participant_times_s.begin(),
                                           participant_times_s.end());
  return slowest + aggregation_delay_s + broadcast_s;
}

TimeReport round_time(std::span<const ClusterTiming> clusters) {
  TimeReport report;
  for (const auto &c : clusters) {
    const double term = cluster_time(c.participant_times_s,
                                     c.aggregation_delay_s, c.broadcast_s);
    report.cluster_max_s.push_back(*std::max_element(
        c.participant_times_s.begin(), c.participant_times_s.end()));
    report.cluster_term_s.push_back(term);
    report.aggregation_delay_s.push_back(c.aggregation_delay_s);
    report.broadcast_s.push_back(c.broadcast_s);
    report.total_s += term;
  }
  return report;
}

double tx_energy(double tx_power_w, double bits, double rate_bps) {
  if (bits == 0.0) return 0.0;
  return tx_power_w * comm_time(bits, rate_bps);
}

double cmp_energy(double energy_coefficient, double cpu_freq_hz,
                  double t_cmp_s) {
  return energy_coefficient * cpu_freq_hz * cpu_freq_hz * cpu_freq_hz *
         t_cmp_s;
}

EnergyReport energy_report(std::span<const ClientEnergy> clients,
                           double energy_coefficient) {
  std::vector<const ClientEnergy *> ordered;
  ordered.reserve(clients.size());
  for (const auto &c : clients) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ClientEnergy *a, const ClientEnergy *b) {
                     return a->client_id < b->client_id;
                   });
  EnergyReport report;
  for (const ClientEnergy *c : ordered) {
    report.e_tx += tx_energy(c->tx_power_w, c->bits_up, c->rate_bps);
    report.e_cmp +=
        cmp_energy(energy_coefficient, c->cpu_freq_hz, c->t_cmp_s);
  }
  report.e_total = report.e_tx + report.e_cmp;
  return report;
}

}  // namespace orbitfl::constellation
