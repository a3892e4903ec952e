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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "orbitfl/domain/model_vector.h"
#include "orbitfl/domain/rng.h"

namespace orbitfl::compression {

//! Kept coordinates of a sparsified update, values already scaled by d/k.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  ModelVector to_dense() const;
};

/*! Keeps k coordinates chosen uniformly without replacement and scales
 * them by d/k. Throws std::invalid_argument unless 1 <= k <= d.
 */
SparseVector sparsify(const ModelVector &delta, std::size_t k, SeededRng &rng);

//! k = max(1, round(ratio * d)), clamped to d.
std::size_t kept_count(std::size_t dim, double ratio);

//! 8 when max_j |current[j] - previous[j]| > z, else 4.
int select_bitwidth(const ModelVector &current, const ModelVector &previous,
                    double z);

//! Number of nonzero magnitude levels, 2^(b-1) - 1.
inline std::uint32_t quantization_levels(int bit_width) {
  return (std::uint32_t{1} << (bit_width - 1)) - 1;
}

struct QuantizedEntry {
  std::uint32_t index = 0;
  bool negative = false;
  std::uint32_t code = 0;  // [0, levels]

  bool operator==(const QuantizedEntry &) const = default;
};

struct CompressedUpdate {
  std::uint32_t client_id = 0;
  std::uint32_t round = 0;
  std::uint8_t bit_width = 4;
  std::uint32_t dim = 0;
  float l2_norm = 0.0f;
  std::vector<QuantizedEntry> entries;  // ascending index

  std::size_t kept() const { return entries.size(); }
  bool operator==(const CompressedUpdate &) const = default;
};

/*! Stochastic quantization of the nonzero entries.
 *
 * The norm is stored as the smallest float32 not below the true l2 norm,
 * so every normalized magnitude lies in [0, 1] and rounding stays
 * unbiased. Throws std::invalid_argument unless b is 4 or 8.
 */
CompressedUpdate quantize(const SparseVector &v, int bit_width, SeededRng &rng,
                          std::uint32_t client_id = 0, std::uint32_t round = 0);

/*! Dense reconstruction S * sign * code / levels. Throws CodecError on
 * out-of-range or non-increasing indices, or codes above the level count.
 */
ModelVector decode(const CompressedUpdate &cu);

//! Sparsify, pick the bit width against previous, quantize.
CompressedUpdate compress(const ModelVector &delta, const ModelVector &previous,
                          double sparsity_ratio, double z, SeededRng &rng,
                          std::uint32_t client_id = 0,
                          std::uint32_t round = 0);

//! Fixed header bytes ahead of the packed records.
inline constexpr std::size_t kWireHeaderBytes = 26;
inline constexpr std::uint8_t kWireVersion = 1;

//! Exact encoded size of k records at bit width b.
std::size_t encoded_size(std::size_t kept, int bit_width);

std::vector<std::uint8_t> encode_wire(const CompressedUpdate &cu);

/*! Parses exactly one encoded update. Throws CodecError on bad magic or
 * version, truncation, trailing bytes, nonzero padding, a code above the
 * level count, or an invalid index sequence.
 */
CompressedUpdate decode_wire(std::span<const std::uint8_t> bytes);

}  // namespace orbitfl::compression
