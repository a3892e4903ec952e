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
#include <random>

namespace orbitfl {

//! Stream identifiers. Every consumer owns a disjoint id so that the order
//! in which independent consumers run cannot change any draw.
namespace streams {
inline constexpr std::uint64_t kPartitioner = 1;
inline constexpr std::uint64_t kClustering = 2;
inline constexpr std::uint64_t kGroundStation = 3;
inline constexpr std::uint64_t kSynthesis = 4;
inline constexpr std::uint64_t kConstellation = 5;
inline constexpr std::uint64_t kModelInit = 6;
inline constexpr std::uint64_t kClientBase = 1ull << 20;
inline constexpr std::uint64_t kCodecBase = 2ull << 20;

inline constexpr std::uint64_t client(std::uint64_t id) {
  return kClientBase + id;
}
inline constexpr std::uint64_t codec(std::uint64_t id) {
  return kCodecBase + id;
}
}  // namespace streams

/*! Seeded random stream.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The distribution transforms are implemented here rather than
 * taken from <random>, because the standard leaves those unspecified and
 * they differ between library vendors.
 */
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  //! Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  //! Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  //! Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  //! Standard normal via Box-Muller; the second variate is cached.
  double normal();

  //! Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);

  //! Beta(a, b) from two gamma draws.
  double beta(double a, double b);

  bool operator==(const SeededRng &other) const {
    return seed_ == other.seed_ && stream_id_ == other.stream_id_ &&
           engine_ == other.engine_ && has_spare_ == other.has_spare_ &&
           (!has_spare_ || spare_ == other.spare_);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace orbitfl
