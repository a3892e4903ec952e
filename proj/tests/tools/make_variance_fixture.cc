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

// Regenerates tests/fixtures/variance_golden.txt from the closed-form
// variance oracle. Usage: make_variance_fixture <output path>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "oracles.h"

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: make_variance_fixture <output path>\n";
    return 2;
  }
  constexpr std::size_t kDim = 256;
  constexpr std::size_t kKept = 32;
  constexpr int kBitWidth = 8;
  constexpr int kSubsets = 200000;
  constexpr std::uint64_t kSeed = 20260101;

  const auto v = orbitfl::testing::fixed_vector(kDim);
  const double omega = orbitfl::testing::variance_oracle(v, kKept, kBitWidth, kSubsets, kSeed);

  std::ofstream out(argv[1]);
  if (!out) {
    std::cerr << "cannot write " << argv[1] << "\n";
    return 3;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", omega);
  out << "# Relative compression variance E||Q(S(v)) - v||^2 / ||v||^2 of\n"
      << "# fixed_vector(dim), from the closed-form oracle.\n"
      << "dim = " << kDim << "\n"
      << "kept = " << kKept << "\n"
      << "bit_width = " << kBitWidth << "\n"
      << "subsets = " << kSubsets << "\n"
      << "seed = " << kSeed << "\n"
      << "omega_hat = " << buf << "\n";
  std::cout << "omega_hat = " << buf << "\n";
  return 0;
}
