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
#include "orbitfl/harness/metrics.h"

#include <fstream>
#include <sstream>
#include <system_error>

#include "orbitfl/domain/error.h"
#include "orbitfl/domain/format.h"

namespace orbitfl::harness {

namespace {

template <typename T>
T int_field(std::string_view s) {
  auto v = parse_integer<T>(s);
  if (!v) throw IoError("metrics: malformed integer '" + std::string(s) + "'");
  return *v;
}

double real_field(std::string_view s) {
  auto v = parse_double(s);
  if (!v) throw IoError("metrics: malformed real '" + std::string(s) + "'");
  return *v;
}

}  // namespace

std::string format_metrics_row(const aggregation::RoundMetrics &m) {
  std::string out;
  out += std::to_string(m.round) + ',';
  out += format_double(m.wall_clock_s) + ',';
  out += format_double(m.accuracy) + ',';
  out += format_double(m.loss) + ',';
  out += format_double(m.e_tx_j) + ',';
  out += format_double(m.e_cmp_j) + ',';
  out += std::to_string(m.bytes_up) + ',';
  out += std::to_string(m.bytes_down) + ',';
  out += std::to_string(m.participants) + ',';
  out += std::to_string(m.skipped);
  return out;
}

std::vector<aggregation::RoundMetrics> parse_metrics(std::string_view csv) {
  std::vector<aggregation::RoundMetrics> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kMetricsHeader) throw IoError("metrics: header mismatch");
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 10) throw IoError("metrics: expected 10 fields");
    aggregation::RoundMetrics m;
    m.round = int_field<int>(f[0]);
    m.wall_clock_s = real_field(f[1]);
    m.accuracy = real_field(f[2]);
    m.loss = real_field(f[3]);
    m.e_tx_j = real_field(f[4]);
    m.e_cmp_j = real_field(f[5]);
    m.bytes_up = int_field<std::uint64_t>(f[6]);
    m.bytes_down = int_field<std::uint64_t>(f[7]);
    m.participants = int_field<int>(f[8]);
    m.skipped = int_field<int>(f[9]);
    rows.push_back(m);
  }
  if (header) throw IoError("metrics: missing header");
  return rows;
}

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

}  // namespace orbitfl::harness
