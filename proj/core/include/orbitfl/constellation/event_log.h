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
#include <string>
#include <string_view>
#include <vector>

namespace orbitfl::constellation {

//! One client in one round. Reals are written in shortest round-trip form
//! so that sums recomputed from the file are bit-identical.
struct EventRow {
  int round = 0;
  int client_id = 0;
  double t_cmp_s = 0.0;
  double t_com_s = 0.0;
  std::uint64_t bits_up = 0;
  double e_tx_j = 0.0;
  double e_cmp_j = 0.0;
  bool participated = false;

  bool operator==(const EventRow &) const = default;
};

inline constexpr std::string_view kEventLogHeader =
    "round,client_id,t_cmp_s,t_com_s,bits_up,e_tx_j,e_cmp_j,participated";

//! One cluster in one round: the membership and the two per-cluster time
//! constants needed to rebuild T_c from the event log.
struct ClusterRow {
  int round = 0;
  int cluster = 0;
  int ps_id = 0;
  std::vector<int> members;  // ascending ids
  double aggregation_delay_s = 0.0;
  double broadcast_s = 0.0;

  bool operator==(const ClusterRow &) const = default;
};

inline constexpr std::string_view kClusterLogHeader =
    "round,cluster,ps_id,members,t_sk_s,t_broc_s";

std::string format_event_row(const EventRow &row);
std::string format_cluster_row(const ClusterRow &row);

//! Parse a whole CSV body including the header line. Throws IoError on a
//! header mismatch or malformed row.
std::vector<EventRow> parse_event_log(std::string_view csv);
std::vector<ClusterRow> parse_cluster_log(std::string_view csv);

}  // namespace orbitfl::constellation
