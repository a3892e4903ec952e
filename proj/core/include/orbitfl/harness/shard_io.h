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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "orbitfl/domain/types.h"

namespace orbitfl::harness {

inline constexpr std::uint8_t kShardVersion = 1;
inline constexpr std::uint8_t kUnlabeled = 255;
inline constexpr std::size_t kShardHeaderBytes = 13;

/*! Shard layout: magic "SFSD", version u8, count u32 LE, H u8, W u8,
 * channels u8, num_classes u8; then per sample H*W*ch float32 LE features
 * and a u8 label (255 = unlabeled).
 */
std::vector<std::uint8_t> encode_shard(const Dataset &data);

//! Throws IoError on bad magic or version, truncation, trailing bytes,
//! non-finite features or a label outside [0, num_classes).
Dataset decode_shard(std::span<const std::uint8_t> bytes);

void write_shard(const std::filesystem::path &path, const Dataset &data);
Dataset read_shard(const std::filesystem::path &path);

//! File names used by a partitioned data directory.
std::string client_shard_name(int client_id);
inline constexpr const char *kGsShardName = "gs_labeled.sfsd";
inline constexpr const char *kEvalShardName = "eval.sfsd";

}  // namespace orbitfl::harness
