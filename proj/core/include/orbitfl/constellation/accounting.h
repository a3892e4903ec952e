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
#include <span>
#include <vector>

#include "orbitfl/domain/types.h"

namespace orbitfl::constellation {

struct LinkBudget {
  double rate_bps = 0.0;
  double gain = 0.0;  // (0, 1]
  double distance_m = 0.0;
};

//! Free-space path gain (c / (4 pi d f_c))^2, capped at 1.
double free_space_gain(double distance_m, double carrier_hz);

//! Shannon rate B log2(1 + P0 h / N0). Throws on B <= 0.
double link_rate(double bandwidth_hz, double tx_power_w, double gain,
                 double noise_density_w_hz);

//! Link budget between two positions using free-space gain.
LinkBudget link_budget(const Vec3 &from, const Vec3 &to, double bandwidth_hz,
                       double tx_power_w, double noise_density_w_hz,
                       double carrier_hz);

//! D Q / f. Throws on f <= 0.
double comp_time(double samples, double cycles_per_sample, double cpu_freq_hz);

//! zeta / r. Throws on r <= 0, which means there is no usable link.
double comm_time(double payload_bits, double rate_bps);

//! Timing inputs of one cluster for one round.
struct ClusterTiming {
  int cluster = 0;
  //! T_i^m = t_cmp + t_com of every aggregated participant.
  std::vector<double> participant_times_s;
  double aggregation_delay_s = 0.0;  // T_{s_k}
  double broadcast_s = 0.0;          // t_broc
};

struct TimeReport {
  std::vector<double> cluster_max_s;   // max_i T_i^m per cluster
  std::vector<double> cluster_term_s;  // max + T_sk + t_broc per cluster
  std::vector<double> aggregation_delay_s;
  std::vector<double> broadcast_s;
  double total_s = 0.0;                // T_c
};

//! One cluster's term: max participant time + T_sk + t_broc.
//! Throws on an empty participant set.
double cluster_time(std::span<const double> participant_times_s,
                    double aggregation_delay_s, double broadcast_s);

//! Total processing time T_c, summed over clusters in the given order.
TimeReport round_time(std::span<const ClusterTiming> clusters);

struct EnergyReport {
  double e_tx = 0.0;
  double e_cmp = 0.0;
  double e_total = 0.0;
};

//! Per-client inputs for the energy sums.
struct ClientEnergy {
  int client_id = 0;
  double tx_power_w = 0.0;
  double bits_up = 0.0;  // 0 when the client did not transmit
  double rate_bps = 0.0;
  double cpu_freq_hz = 0.0;
  double t_cmp_s = 0.0;  // 0 when the client did not compute
};

//! P0 |w| / r; zero for a client that sent nothing.
double tx_energy(double tx_power_w, double bits, double rate_bps);

//! eps0 f^3 t_cmp.
double cmp_energy(double energy_coefficient, double cpu_freq_hz,
                  double t_cmp_s);

//! Sums per-client energy in ascending client id.
EnergyReport energy_report(std::span<const ClientEnergy> clients,
                           double energy_coefficient);

//! Both objectives of a round. They are logged side by side; nothing
//! scalarizes them.
struct Objective {
  double time_s = 0.0;
  double energy_j = 0.0;
};

inline Objective objective(double total_time_s, double total_energy_j) {
  return {total_time_s, total_energy_j};
}

}  // namespace orbitfl::constellation
