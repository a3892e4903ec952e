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
#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.h"
#include "orbitfl/clustering/clustering.h"
#include "orbitfl/constellation/orbit.h"

namespace orbitfl::clustering {
namespace {

std::vector<ModelVector> random_updates(int n, std::size_t dim, std::uint64_t seed) {
  SeededRng rng(seed, 0);
  std::vector<ModelVector> out;
  for (int i = 0; i < n; ++i) {
    ModelVector v(dim);
    for (auto &x : v) x = rng.normal();
    out.push_back(std::move(v));
  }
  return out;
}

void expect_symmetric(const SquareMatrix &m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) ASSERT_EQ(m(i, j), m(j, i));
  }
}

TEST(GradientSimilarity, IdenticalOppositeOrthogonal) {
  const std::vector<ModelVector> u{{1.0, 2.0, 0.0}, {1.0, 2.0, 0.0},
                                   {-1.0, -2.0, 0.0}, {0.0, 0.0, 3.0}};
  const auto h = gradient_similarity(u);
  EXPECT_DOUBLE_EQ(h(0, 1), 1.0);
  EXPECT_NEAR(h(0, 2), 0.0, 1e-15);  // sqrt(5)^2 rounds
  EXPECT_DOUBLE_EQ(h(0, 3), 0.5);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(h(i, i), 1.0);
}

TEST(GradientSimilarity, ZeroUpdateNamesClient) {
  const std::vector<ModelVector> u{{1.0, 0.0}, {0.0, 0.0}};
  try {
    gradient_similarity(u);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument &e) {
    EXPECT_NE(std::string(e.what()).find("client 1"), std::string::npos);
  }
  const std::vector<ModelVector> mismatch{{1.0, 0.0}, {1.0}};
  EXPECT_THROW(gradient_similarity(mismatch), std::invalid_argument);
}

TEST(GradientSimilarity, SymmetricAndBounded) {
  const auto h = gradient_similarity(random_updates(9, 40, 3));
  expect_symmetric(h);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      EXPECT_GE(h(i, j), 0.0);
      EXPECT_LE(h(i, j), 1.0);
    }
  }
}

TEST(GradientSimilarity, ScaleInvariance) {
  const auto u = random_updates(6, 50, 17);
  const auto base = gradient_similarity(u);
  // Power-of-two scales are exact.
  for (double c : {0.5, 4.0, 1024.0, std::ldexp(1.0, -300)}) {
    auto scaled = u;
    for (auto &v : scaled) for (auto &x : v) x *= c;
    EXPECT_EQ(gradient_similarity(scaled), base) << c;
  }
  // Other scales agree to rounding of the scaled inputs.
  for (double c : {3.0, 0.1, 1e7}) {
    auto scaled = u;
    for (auto &v : scaled) for (auto &x : v) x *= c;
    const auto h = gradient_similarity(scaled);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = 0; j < h.size(); ++j) {
        EXPECT_NEAR(h(i, j), base(i, j), 1e-14) << c;
      }
    }
  }
}

TEST(GeoSimilarity, ClosestFarthestMidpoint) {
  const std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {3, 0, 0}};
  // Off-diagonal distances 1, 3, 2: R_min 1, R_max 3.
  const auto h = geo_similarity(p);
  EXPECT_DOUBLE_EQ(h(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(h(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(h(1, 2), 0.5);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(h(i, i), 1.0);
  expect_symmetric(h);
}

TEST(GeoSimilarity, CoincidentPositionsGiveAllOnes) {
  const std::vector<Vec3> p(4, Vec3{7e6, 1e6, -2e6});
  EXPECT_EQ(geo_similarity(p), SquareMatrix(4, 1.0));
}

TEST(GeoSimilarity, SymmetricOnConstellation) {
  const auto slots = constellation::walker_constellation(12, 3, 1300.0, 53.0);
  std::vector<Vec3> p;
  for (const auto &s : slots) p.push_back(constellation::propagate(s, 600.0));
  expect_symmetric(geo_similarity(p));
}

TEST(JointFeatures, ThetaWeights) {
  const SquareMatrix hc(3, 0.8);
  const SquareMatrix hg(3, 0.5);
  const auto z0 = joint_features(hc, hg, 0.0);
  const auto z1 = joint_features(hc, hg, 1.0);
  const auto z4 = joint_features(hc, hg, 0.4);
  ASSERT_EQ(z0[0].size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(z0[i][j], 0.0);
      EXPECT_EQ(z1[i][3 + j], 0.0);
      EXPECT_DOUBLE_EQ(z4[i][j], 0.4 * 0.8);
      EXPECT_DOUBLE_EQ(z4[i][3 + j], 0.6 * 0.5);
    }
  }
  EXPECT_THROW(joint_features(SquareMatrix(2), SquareMatrix(3), 0.5), std::invalid_argument);
}

TEST(KMeans, IdenticalPointsOneCluster) {
  const std::vector<FeatureVector> f(7, FeatureVector{0.3, 0.3, 0.1});
  SeededRng rng(1, streams::kClustering);
  const auto a = kmeans_cluster(f, 1, rng);
  EXPECT_EQ(a.labels, std::vector<int>(7, 0));
  EXPECT_EQ(a.num_clusters(), 1);
}

TEST(KMeans, TwoBlobsMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRng gen(seed, 99);
    std::vector<FeatureVector> f;
    const int n = 12;
    for (int i = 0; i < n; ++i) {
      const double cx = (i % 3 == 0) ? 5.0 : -5.0;
      f.push_back({cx + gen.normal(), gen.normal(), 0.5 * gen.normal()});
    }
    const auto oracle = testing::best_two_partition(f);
    SeededRng rng(seed, streams::kClustering);
    const auto a = kmeans_cluster(f, 2, rng);
    // Compare partitions up to label permutation.
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(a.labels[i] == a.labels[0], oracle.labels[i] == oracle.labels[0])
          << "seed " << seed << " point " << i;
    }
  }
}

TEST(KMeans, EqualPointsShareLabels) {
  SeededRng gen(4, 0);
  std::vector<FeatureVector> f;
  for (int i = 0; i < 10; ++i) f.push_back({gen.normal(), gen.normal()});
  f.push_back(f[3]);
  f.push_back(f[7]);
  SeededRng rng(4, streams::kClustering);
  const auto a = kmeans_cluster(f, 3, rng);
  EXPECT_EQ(a.labels[10], a.labels[3]);
  EXPECT_EQ(a.labels[11], a.labels[7]);
}

TEST(KMeans, ClustersNonEmptyAndDeterministic) {
  SeededRng gen(8, 0);
  std::vector<FeatureVector> f;
  for (int i = 0; i < 20; ++i) f.push_back({gen.uniform(), gen.uniform(), gen.uniform()});
  for (int k = 1; k <= 20; ++k) {
    SeededRng r1(8, streams::kClustering), r2(8, streams::kClustering);
    const auto a = kmeans_cluster(f, k, r1);
    const auto b = kmeans_cluster(f, k, r2);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.centroids, b.centroids);
    for (int c = 0; c < k; ++c) EXPECT_FALSE(a.members(c).empty()) << k << " " << c;
  }
  SeededRng rng(8, 2);
  EXPECT_THROW(kmeans_cluster(f, 0, rng), std::invalid_argument);
  EXPECT_THROW(kmeans_cluster(f, 21, rng), std::invalid_argument);
}

TEST(SelectPs, SingleMember) {
  const std::vector<Vec3> pos{{1, 2, 3}, {4, 5, 6}};
  const std::vector<double> load{1.0, 2.0};
  EXPECT_EQ(select_ps(std::vector<int>{1}, pos, load), 1);
}

TEST(SelectPs, EquidistantMembersGoToIdlest) {
  // Members 0 and 2 sit symmetrically about the mean.
  const std::vector<Vec3> pos{{-1, 0, 0}, {9, 9, 9}, {1, 0, 0}};
  EXPECT_EQ(select_ps(std::vector<int>{0, 2}, pos, std::vector<double>{3.0, 0.0, 2.0}), 2);
  EXPECT_EQ(select_ps(std::vector<int>{0, 2}, pos, std::vector<double>{1.0, 0.0, 2.0}), 0);
  // Coincident collinear members with distinct loads.
  const std::vector<Vec3> same(3, Vec3{7e6, 0, 0});
  EXPECT_EQ(select_ps(std::vector<int>{0, 1, 2}, same, std::vector<double>{0.3, 0.1, 0.2}), 1);
  // Equal loads fall back to the smaller id.
  EXPECT_EQ(select_ps(std::vector<int>{0, 1, 2}, same, std::vector<double>{0.5, 0.5, 0.5}), 0);
}

TEST(SelectPs, MatchesExhaustiveArgmin) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SeededRng gen(seed, 1);
    std::vector<Vec3> pos;
    std::vector<double> load;
    for (int i = 0; i < 5; ++i) {
      pos.push_back({gen.uniform(-7e6, 7e6), gen.uniform(-7e6, 7e6), gen.uniform(-7e6, 7e6)});
      load.push_back(gen.uniform());
    }
    const std::vector<int> members{0, 1, 2, 3, 4};
    long double mx = 0, my = 0, mz = 0;
    for (const auto &p : pos) {
      mx += p[0];
      my += p[1];
      mz += p[2];
    }
    mx /= 5;
    my /= 5;
    mz /= 5;
    int best = -1;
    long double best_d = std::numeric_limits<long double>::infinity();
    for (int i = 0; i < 5; ++i) {
      const long double d = std::sqrt((pos[i][0] - mx) * (pos[i][0] - mx) +
                                      (pos[i][1] - my) * (pos[i][1] - my) +
                                      (pos[i][2] - mz) * (pos[i][2] - mz));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    EXPECT_EQ(select_ps(members, pos, load), best) << seed;
  }
}

TEST(SelectPs, TranslationInvariant) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SeededRng gen(seed, 2);
    std::vector<Vec3> pos;
    std::vector<double> load;
    for (int i = 0; i < 6; ++i) {
      pos.push_back({gen.uniform(-1e6, 1e6), gen.uniform(-1e6, 1e6), gen.uniform(-1e6, 1e6)});
      load.push_back(gen.uniform());
    }
    const std::vector<int> members{0, 2, 3, 5};
    const int base = select_ps(members, pos, load);
    auto moved = pos;
    for (auto &p : moved) {
      p[0] += 1.5e6;
      p[1] -= 3e5;
      p[2] += 42.0;
    }
    EXPECT_EQ(select_ps(members, moved, load), base) << seed;
  }
}

TEST(ElectParameterServers, PsBelongsToItsCluster) {
  SeededRng gen(3, 0);
  std::vector<FeatureVector> f;
  std::vector<Vec3> pos;
  std::vector<double> load;
  for (int i = 0; i < 20; ++i) {
    f.push_back({gen.uniform(), gen.uniform()});
    pos.push_back({gen.uniform(-7e6, 7e6), gen.uniform(-7e6, 7e6), 0.0});
    load.push_back(gen.uniform());
  }
  SeededRng rng(3, streams::kClustering);
  auto a = kmeans_cluster(f, 4, rng);
  elect_parameter_servers(a, pos, load);
  ASSERT_EQ(a.ps_ids.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(a.labels[a.ps_ids[k]], k);
}

}  // namespace
}  // namespace orbitfl::clustering
