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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "orbitfl/aggregation/orchestrator.h"

namespace orbitfl::harness {

inline constexpr std::string_view kMetricsHeader =
    "round,wall_clock_s,accuracy,loss,e_tx_j,e_cmp_j,bytes_up,bytes_down,"
    "participants,skipped";

std::string format_metrics_row(const aggregation::RoundMetrics &m);

//! Parses a metrics CSV including its header. Throws IoError if malformed.
std::vector<aggregation::RoundMetrics> parse_metrics(std::string_view csv);

//! Writes via a sibling temp file and rename. Throws IoError.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content);

//! Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path &path);

}  // namespace orbitfl::harness
