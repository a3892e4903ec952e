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
#include "orbitfl/compression/codec.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "orbitfl/domain/error.h"

namespace orbitfl::compression {

ModelVector SparseVector::to_dense() const {
  ModelVector out(dim);
  for (std::size_t t = 0; t < indices.size(); ++t) out[indices[t]] = values[t];
  return out;
}

SparseVector sparsify(const ModelVector &delta, std::size_t k, SeededRng &rng) {
  const std::size_t d = delta.size();
  if (k < 1 || k > d) throw std::invalid_argument("sparsify: k out of [1, d]");
  if (d > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("sparsify: dimension exceeds 32-bit indices");
  }
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  std::vector<std::uint32_t> pool(d);
  std::iota(pool.begin(), pool.end(), std::uint32_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_int(d - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());

  SparseVector out;
  out.dim = d;
  out.indices = std::move(pool);
  out.values.reserve(k);
  const double scale = static_cast<double>(d) / static_cast<double>(k);
  for (std::uint32_t i : out.indices) out.values.push_back(delta[i] * scale);
  return out;
}

std::size_t kept_count(std::size_t dim, double ratio) {
  if (dim == 0) return 0;
  const double raw = std::round(ratio * static_cast<double>(dim));
  const auto k = static_cast<std::size_t>(std::max(1.0, raw));
  return std::min(k, dim);
}

int select_bitwidth(const ModelVector &current, const ModelVector &previous,
                    double z) {
  if (current.size() != previous.size()) {
    throw std::invalid_argument("select_bitwidth: size mismatch");
  }
  double diff = 0.0;
  for (std::size_t j = 0; j < current.size(); ++j) {
    diff = std::max(diff, std::abs(current[j] - previous[j]));
  }
  return diff > z ? 8 : 4;
}

CompressedUpdate quantize(const SparseVector &v, int bit_width, SeededRng &rng,
                          std::uint32_t client_id, std::uint32_t round) {
  if (bit_width != 4 && bit_width != 8) {
    throw std::invalid_argument("quantize: bit width must be 4 or 8");
  }
  if (v.indices.size() != v.values.size()) {
    throw std::invalid_argument("quantize: index/value size mismatch");
  }
  CompressedUpdate cu;
  cu.client_id = client_id;
  cu.round = round;
  cu.bit_width = static_cast<std::uint8_t>(bit_width);
  cu.dim = static_cast<std::uint32_t>(v.dim);

  double sq = 0.0;
  for (double x : v.values) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm == 0.0) return cu;

  float s = static_cast<float>(norm);
  if (static_cast<double>(s) < norm) {
    s = std::nextafter(s, std::numeric_limits<float>::infinity());
  }
  cu.l2_norm = s;

  const std::uint32_t levels = quantization_levels(bit_width);
  for (std::size_t t = 0; t < v.values.size(); ++t) {
    const double x = v.values[t];
    if (x == 0.0) continue;
    const double scaled = std::abs(x) / static_cast<double>(s) * levels;
    const double lo = std::floor(scaled);
    auto code = static_cast<std::uint32_t>(lo);
    if (code < levels && rng.bernoulli(scaled - lo)) ++code;
    cu.entries.push_back(QuantizedEntry{v.indices[t], x < 0.0, code});
  }
  return cu;
}

ModelVector decode(const CompressedUpdate &cu) {
  if (cu.bit_width != 4 && cu.bit_width != 8) {
    throw CodecError("decode: bit width must be 4 or 8");
  }
  const std::uint32_t levels = quantization_levels(cu.bit_width);
  ModelVector out(cu.dim);
  const double s = cu.l2_norm;
  std::int64_t prev = -1;
  for (const auto &e : cu.entries) {
    if (e.index >= cu.dim || static_cast<std::int64_t>(e.index) <= prev) {
      throw CodecError("decode: malformed index sequence");
    }
    if (e.code > levels) throw CodecError("decode: code exceeds level count");
    prev = e.index;
    const double mag = s * (static_cast<double>(e.code) / levels);
    out[e.index] = e.negative ? -mag : mag;
  }
  return out;
}

CompressedUpdate compress(const ModelVector &delta, const ModelVector &previous,
                          double sparsity_ratio, double z, SeededRng &rng,
                          std::uint32_t client_id, std::uint32_t round) {
  const int b = select_bitwidth(delta, previous, z);
  const auto sparse = sparsify(delta, kept_count(delta.size(), sparsity_ratio), rng);
  return quantize(sparse, b, rng, client_id, round);
}

}  // namespace orbitfl::compression
