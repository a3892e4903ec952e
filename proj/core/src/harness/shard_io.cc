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
#include "orbitfl/harness/shard_io.h"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "orbitfl/domain/error.h"
#include "orbitfl/harness/metrics.h"

namespace orbitfl::harness {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'F', 'S', 'D'};

std::uint8_t narrow(int v, const char *what) {
  if (v < 0 || v > 255) throw IoError(std::string("shard: ") + what + " exceeds u8");
  return static_cast<std::uint8_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_shard(const Dataset &data) {
  const std::size_t features = data.shape.size();
  std::vector<std::uint8_t> out;
  out.reserve(kShardHeaderBytes + data.size() * (4 * features + 1));
  for (std::uint8_t b : kMagic) out.push_back(b);
  out.push_back(kShardVersion);
  const auto count = static_cast<std::uint32_t>(data.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  out.push_back(narrow(data.shape.height, "height"));
  out.push_back(narrow(data.shape.width, "width"));
  out.push_back(narrow(data.shape.channels, "channels"));
  out.push_back(narrow(data.num_classes, "num_classes"));
  for (const Sample &s : data.samples) {
    if (s.features.size() != features) throw IoError("shard: sample size mismatch");
    for (float f : s.features) {
      const auto bits = std::bit_cast<std::uint32_t>(f);
      for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    if (s.label && (*s.label < 0 || *s.label >= data.num_classes)) {
      throw IoError("shard: label out of range");
    }
    out.push_back(s.label ? static_cast<std::uint8_t>(*s.label) : kUnlabeled);
  }
  return out;
}

Dataset decode_shard(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kShardHeaderBytes) throw IoError("shard: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("shard: bad magic");
  if (bytes[4] != kShardVersion) throw IoError("shard: unsupported version");
  const std::uint32_t count = static_cast<std::uint32_t>(bytes[5]) |
                              static_cast<std::uint32_t>(bytes[6]) << 8 |
                              static_cast<std::uint32_t>(bytes[7]) << 16 |
                              static_cast<std::uint32_t>(bytes[8]) << 24;
  Dataset data;
  data.shape = GridShape{bytes[9], bytes[10], bytes[11]};
  data.num_classes = bytes[12];
  const std::size_t features = data.shape.size();
  const std::size_t record = 4 * features + 1;
  const std::size_t expected = kShardHeaderBytes + count * record;
  if (bytes.size() < expected) throw IoError("shard: truncated payload");
  if (bytes.size() > expected) throw IoError("shard: trailing bytes");

  data.samples.resize(count);
  const std::uint8_t *p = bytes.data() + kShardHeaderBytes;
  for (auto &s : data.samples) {
    s.features.resize(features);
    for (auto &f : s.features) {
      const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                                 static_cast<std::uint32_t>(p[1]) << 8 |
                                 static_cast<std::uint32_t>(p[2]) << 16 |
                                 static_cast<std::uint32_t>(p[3]) << 24;
      f = std::bit_cast<float>(bits);
      if (!std::isfinite(f)) throw IoError("shard: non-finite feature");
      p += 4;
    }
    const std::uint8_t label = *p++;
    if (label != kUnlabeled) {
      if (label >= data.num_classes) throw IoError("shard: label out of range");
      s.label = label;
    }
  }
  return data;
}

void write_shard(const std::filesystem::path &path, const Dataset &data) {
  const auto bytes = encode_shard(data);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                           bytes.size()));
}

Dataset read_shard(const std::filesystem::path &path) {
  const std::string raw = read_file(path);
  return decode_shard(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t *>(raw.data()), raw.size()));
}

std::string client_shard_name(int client_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "client_%03d.sfsd", client_id);
  return buf;
}

}  // namespace orbitfl::harness
