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
#include <set>

#include "orbitfl/domain/config.h"
#include "orbitfl/domain/error.h"
#include "orbitfl/domain/model_vector.h"
#include "orbitfl/domain/rng.h"

namespace orbitfl {
namespace {

ExperimentConfig with(std::string_view assignment) {
  ExperimentConfig cfg;
  apply_override(cfg, assignment);
  return cfg;
}

std::string error_key(const ExperimentConfig &cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError &e) {
    return e.key();
  }
  return "<none>";
}

std::string error_message(const ExperimentConfig &cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

TEST(ValidateConfig, TableDefaultsAccepted) {
  ExperimentConfig cfg;
  cfg.confidence = 0.95;
  cfg.selection_rate = 0.6;
  cfg.num_clusters = 4;
  cfg.num_clients = 20;
  EXPECT_EQ(validate_config(cfg), cfg);
}

TEST(ValidateConfig, DefaultsMatchTable) {
  const ExperimentConfig cfg;
  EXPECT_EQ(cfg.selection_rate, 0.6);
  EXPECT_EQ(cfg.gradient_threshold, 0.01);
  EXPECT_EQ(cfg.batch_size, 64);
  EXPECT_EQ(cfg.momentum, 0.9);
  EXPECT_EQ(cfg.altitude_km, 1300.0);
  EXPECT_EQ(cfg.inclination_deg, 53.0);
  EXPECT_EQ(cfg.confidence, 0.95);
  EXPECT_EQ(cfg.beta_param, 1.0);
  EXPECT_EQ(cfg.loss_weight, 0.5);
  EXPECT_EQ(cfg.learning_rate, 0.01);
  EXPECT_EQ(cfg.recluster_interval, 50);
  EXPECT_EQ(cfg.cluster_weight, 0.4);
  EXPECT_EQ(cfg.energy_coefficient, 1e-28);
}

TEST(ValidateConfig, ZeroSelectionRateRejected) {
  const auto cfg = with("selection_rate = 0");
  EXPECT_EQ(error_key(cfg), "selection_rate");
  EXPECT_NE(error_message(cfg).find("selection rate out of (0,1]"), std::string::npos);
}

TEST(ValidateConfig, MoreClustersThanClientsRejected) {
  auto cfg = with("num_clusters = 30");
  cfg.num_clients = 20;
  EXPECT_EQ(error_key(cfg), "num_clusters");
  EXPECT_NE(error_message(cfg).find("K exceeds C"), std::string::npos);
}

TEST(ValidateConfig, NoSelectableParticipantRejected) {
  auto cfg = with("selection_rate = 0.1");  // 0.1 * 20 / 4 = 0.5
  EXPECT_EQ(error_key(cfg), "selection_rate");
}

TEST(ValidateConfig, RangeViolationsNameTheKey) {
  EXPECT_EQ(error_key(with("confidence = 1.5")), "confidence");
  EXPECT_EQ(error_key(with("loss_weight = -0.1")), "loss_weight");
  EXPECT_EQ(error_key(with("cluster_weight = 2")), "cluster_weight");
  EXPECT_EQ(error_key(with("learning_rate = 0")), "learning_rate");
  EXPECT_EQ(error_key(with("momentum = 1.1")), "momentum");
  EXPECT_EQ(error_key(with("gradient_threshold = 0")), "gradient_threshold");
  EXPECT_EQ(error_key(with("beta_param = 0")), "beta_param");
  EXPECT_EQ(error_key(with("altitude_km = -1")), "altitude_km");
  EXPECT_EQ(error_key(with("model = cnn")), "model");
  EXPECT_EQ(error_key(with("threads = 0")), "threads");
}

TEST(ParseConfig, UnknownKeyAndBadValueRejected) {
  EXPECT_THROW(parse_config("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("rounds = many\n"), ConfigError);
  EXPECT_THROW(parse_config("compression = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("just some words\n"), ConfigError);
  try {
    parse_config("rounds = many\n");
  } catch (const ConfigError &e) {
    EXPECT_EQ(e.key(), "rounds");
  }
}

TEST(ParseConfig, CommentsBlankLinesAndWhitespace) {
  const auto cfg = parse_config(
      "# experiment\n"
      "\n"
      "  rounds = 7   # trailing comment\n"
      "compression=false\n"
      "model = logistic\r\n"
      "seed = 18446744073709551615\n");
  EXPECT_EQ(cfg.rounds, 7);
  EXPECT_FALSE(cfg.compression);
  EXPECT_EQ(cfg.model, "logistic");
  EXPECT_EQ(cfg.seed, std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(cfg.num_clients, ExperimentConfig{}.num_clients);
}

TEST(ParseConfig, RoundTripThroughSerialize) {
  ExperimentConfig cfg;
  cfg.rounds = 13;
  cfg.learning_rate = 0.1 + 0.2;  // not exactly representable in decimal
  cfg.noise_density_dbm_hz = -173.9999;
  cfg.data_dir = "/tmp/shards";
  cfg.compression = false;
  cfg.seed = 987654321987654321ull;
  const auto validated = validate_config(cfg);
  const auto reparsed = parse_config(serialize_config(validated));
  EXPECT_EQ(reparsed, validated);
}

TEST(ParseConfig, EveryKeyIsSerialized) {
  const auto text = serialize_config(ExperimentConfig{});
  for (const auto &key : config_keys()) {
    EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
  }
}

TEST(ApplyOverride, LaterOverridesWin) {
  ExperimentConfig cfg;
  apply_override(cfg, "rounds=3");
  apply_override(cfg, " rounds = 5 ");
  EXPECT_EQ(cfg.rounds, 5);
  EXPECT_THROW(apply_override(cfg, "rounds"), ConfigError);
}

TEST(Units, DecibelConversions) {
  EXPECT_DOUBLE_EQ(dbw_to_watts(30.0), 1000.0);
  EXPECT_DOUBLE_EQ(dbw_to_watts(0.0), 1.0);
  // -174 dBm/Hz = 10^(-20.4) W/Hz.
  EXPECT_NEAR(dbm_per_hz_to_watts_per_hz(-174.0) / std::pow(10.0, -20.4), 1.0, 1e-12);
}

TEST(ModelVectorOps, Arithmetic) {
  const ModelVector a{1.0, -2.0, 3.0};
  ModelVector b{0.5, 0.5, 0.5};
  axpy(2.0, a, b);
  EXPECT_EQ(b, (ModelVector{2.5, -3.5, 6.5}));
  EXPECT_EQ(difference(a, ModelVector{1.0, 1.0, 1.0}), (ModelVector{0.0, -3.0, 2.0}));
  EXPECT_DOUBLE_EQ(dot(a, a), 14.0);
  EXPECT_DOUBLE_EQ(l2_norm(a), std::sqrt(14.0));
  EXPECT_DOUBLE_EQ(max_abs(a), 3.0);
  EXPECT_TRUE(all_finite(a));
  EXPECT_FALSE(all_finite(ModelVector{1.0, std::numeric_limits<double>::quiet_NaN()}));
  EXPECT_FALSE(all_finite(ModelVector{std::numeric_limits<double>::infinity()}));
}

TEST(SeededRngTest, EqualSeedsGiveEqualSequences) {
  SeededRng a(7, 3), b(7, 3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
    ASSERT_EQ(a.normal(), b.normal());
    ASSERT_EQ(a.beta(0.7, 0.7), b.beta(0.7, 0.7));
  }
  EXPECT_EQ(a, b);
}

TEST(SeededRngTest, StreamsAreDisjoint) {
  const std::uint64_t ids[] = {streams::kPartitioner, streams::kClustering,
                               streams::kGroundStation, streams::kSynthesis,
                               streams::kConstellation, streams::kModelInit,
                               streams::client(0), streams::client(1),
                               streams::codec(0), streams::codec(1)};
  std::set<std::uint64_t> first_draws;
  for (auto id : ids) {
    SeededRng r(42, id);
    first_draws.insert(r.next_u64());
  }
  EXPECT_EQ(first_draws.size(), std::size(ids));
  EXPECT_NE(streams::client(5), streams::codec(5));
}

TEST(SeededRngTest, DifferentSeedsDiffer) {
  SeededRng a(1, 0), b(2, 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(SeededRngTest, UniformRangesAndMoments) {
  SeededRng r(11, 0);
  constexpr int kN = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const std::uint64_t k = r.uniform_int(7);
    ASSERT_LT(k, 7u);
    const double z = r.normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / kN, 0.0, 0.02);
  EXPECT_NEAR(sum_sq / kN, 1.0, 0.02);
}

TEST(SeededRngTest, GammaAndBetaMeans) {
  SeededRng r(5, 9);
  constexpr int kN = 100000;
  double g = 0.0, g_small = 0.0, b = 0.0;
  for (int i = 0; i < kN; ++i) {
    g += r.gamma(2.5);
    g_small += r.gamma(0.4);
    const double x = r.beta(2.0, 6.0);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    b += x;
  }
  EXPECT_NEAR(g / kN, 2.5, 0.03);
  EXPECT_NEAR(g_small / kN, 0.4, 0.01);
  EXPECT_NEAR(b / kN, 0.25, 0.005);
}

}  // namespace
}  // namespace orbitfl
