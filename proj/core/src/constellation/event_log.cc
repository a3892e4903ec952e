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
#include "orbitfl/constellation/event_log.h"

#include "orbitfl/domain/error.h"
#include "orbitfl/domain/format.h"

namespace orbitfl::constellation {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> body_lines(std::string_view csv,
                                         std::string_view header) {
  std::vector<std::string_view> lines;
  for (auto line : split(csv, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty() || lines.front() != header) {
    throw IoError("csv header mismatch, expected '" + std::string(header) +
                  "'");
  }
  lines.erase(lines.begin());
  return lines;
}

template <typename T>
T field_int(std::string_view text) {
  auto v = parse_integer<T>(text);
  if (!v) throw IoError("malformed integer '" + std::string(text) + "'");
  return *v;
}

double field_double(std::string_view text) {
  auto v = parse_double(text);
  if (!v) throw IoError("malformed real '" + std::string(text) + "'");
  return *v;
}

}  // namespace

std::string format_event_row(const EventRow &row) {
  std::string out;
  out += std::to_string(row.round);
  out += ',';
  out += std::to_string(row.client_id);
  out += ',';
  out += format_double(row.t_cmp_s);
  out += ',';
  out += format_double(row.t_com_s);
  out += ',';
  out += std::to_string(row.bits_up);
  out += ',';
  out += format_double(row.e_tx_j);
  out += ',';
  out += format_double(row.e_cmp_j);
  out += ',';
  out += row.participated ? '1' : '0';
  return out;
}

std::string format_cluster_row(const ClusterRow &row) {
  std::string out;
  out += std::to_string(row.round);
  out += ',';
  out += std::to_string(row.cluster);
  out += ',';
  out += std::to_string(row.ps_id);
  out += ',';
  for (std::size_t i = 0; i < row.members.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(row.members[i]);
  }
  out += ',';
  out += format_double(row.aggregation_delay_s);
  out += ',';
  out += format_double(row.broadcast_s);
  return out;
}

std::vector<EventRow> parse_event_log(std::string_view csv) {
  std::vector<EventRow> rows;
  for (auto line : body_lines(csv, kEventLogHeader)) {
    auto f = split(line, ',');
    if (f.size() != 8) throw IoError("event log row has wrong field count");
    EventRow r;
    r.round = field_int<int>(f[0]);
    r.client_id = field_int<int>(f[1]);
    r.t_cmp_s = field_double(f[2]);
    r.t_com_s = field_double(f[3]);
    r.bits_up = field_int<std::uint64_t>(f[4]);
    r.e_tx_j = field_double(f[5]);
    r.e_cmp_j = field_double(f[6]);
    if (f[7] != "0" && f[7] != "1") {
      throw IoError("participated must be 0 or 1");
    }
    r.participated = f[7] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::vector<ClusterRow> parse_cluster_log(std::string_view csv) {
  std::vector<ClusterRow> rows;
  for (auto line : body_lines(csv, kClusterLogHeader)) {
    auto f = split(line, ',');
    if (f.size() != 6) throw IoError("cluster log row has wrong field count");
    ClusterRow r;
    r.round = field_int<int>(f[0]);
    r.cluster = field_int<int>(f[1]);
    r.ps_id = field_int<int>(f[2]);
    if (!f[3].empty()) {
      for (auto m : split(f[3], ' ')) r.members.push_back(field_int<int>(m));
    }
    r.aggregation_delay_s = field_double(f[4]);
    r.broadcast_s = field_double(f[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace orbitfl::constellation
