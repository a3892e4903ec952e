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
#include "orbitfl/domain/config.h"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "orbitfl/domain/error.h"
#include "orbitfl/domain/format.h"

namespace orbitfl {

namespace {

using Member =
    std::variant<int ExperimentConfig::*, double ExperimentConfig::*,
                 bool ExperimentConfig::*, std::uint64_t ExperimentConfig::*,
                 std::string ExperimentConfig::*>;

struct Field {
  const char *key;
  Member member;
};

using C = ExperimentConfig;

// Canonical order for serialization.
const std::array kFields = {
    Field{"num_clients", &C::num_clients},
    Field{"num_clusters", &C::num_clusters},
    Field{"rounds", &C::rounds},
    Field{"local_epochs", &C::local_epochs},
    Field{"recluster_interval", &C::recluster_interval},
    Field{"gs_interval", &C::gs_interval},
    Field{"gs_epochs", &C::gs_epochs},
    Field{"selection_window", &C::selection_window},
    Field{"kmeans_max_iters", &C::kmeans_max_iters},
    Field{"confidence", &C::confidence},
    Field{"beta_param", &C::beta_param},
    Field{"loss_weight", &C::loss_weight},
    Field{"cluster_weight", &C::cluster_weight},
    Field{"selection_rate", &C::selection_rate},
    Field{"learning_rate", &C::learning_rate},
    Field{"batch_size", &C::batch_size},
    Field{"momentum", &C::momentum},
    Field{"compression", &C::compression},
    Field{"sparsity_ratio", &C::sparsity_ratio},
    Field{"gradient_threshold", &C::gradient_threshold},
    Field{"normalize_weights", &C::normalize_weights},
    Field{"staleness_weighting", &C::staleness_weighting},
    Field{"altitude_km", &C::altitude_km},
    Field{"inclination_deg", &C::inclination_deg},
    Field{"num_planes", &C::num_planes},
    Field{"require_line_of_sight", &C::require_line_of_sight},
    Field{"carrier_hz", &C::carrier_hz},
    Field{"bandwidth_hz", &C::bandwidth_hz},
    Field{"tx_power_dbw", &C::tx_power_dbw},
    Field{"noise_density_dbm_hz", &C::noise_density_dbm_hz},
    Field{"cpu_freq_hz", &C::cpu_freq_hz},
    Field{"cpu_freq_spread", &C::cpu_freq_spread},
    Field{"cycles_per_sample", &C::cycles_per_sample},
    Field{"energy_coefficient", &C::energy_coefficient},
    Field{"aggregation_delay_s", &C::aggregation_delay_s},
    Field{"gs_lat_deg", &C::gs_lat_deg},
    Field{"gs_lon_deg", &C::gs_lon_deg},
    Field{"model", &C::model},
    Field{"hidden_units", &C::hidden_units},
    Field{"flip_prob", &C::flip_prob},
    Field{"shift_fraction", &C::shift_fraction},
    Field{"noise_scale", &C::noise_scale},
    Field{"cutout_fraction", &C::cutout_fraction},
    Field{"num_classes", &C::num_classes},
    Field{"samples_per_class", &C::samples_per_class},
    Field{"separation", &C::separation},
    Field{"eval_fraction", &C::eval_fraction},
    Field{"labeled_fraction", &C::labeled_fraction},
    Field{"designated_fraction", &C::designated_fraction},
    Field{"data_dir", &C::data_dir},
    Field{"seed", &C::seed},
    Field{"threads", &C::threads},
    Field{"dump_updates", &C::dump_updates},
    Field{"stop_at_accuracy", &C::stop_at_accuracy},
};

const Field *find_field(std::string_view key) {
  for (const auto &f : kFields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError(std::string(key), "invalid value '" + std::string(value) +
                                          "' for key '" + std::string(key) +
                                          "'");
}

void assign(ExperimentConfig &cfg, std::string_view key,
            std::string_view value) {
  const Field *field = find_field(key);
  if (field == nullptr) {
    throw ConfigError(std::string(key),
                      "unknown config key '" + std::string(key) + "'");
  }
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          auto v = parse_double(value);
          if (!v) bad_value(key, value);
          cfg.*member = *v;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") {
            cfg.*member = true;
          } else if (value == "false" || value == "0") {
            cfg.*member = false;
          } else {
            bad_value(key, value);
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          cfg.*member = std::string(value);
        } else {
          auto v = parse_integer<T>(value);
          if (!v) bad_value(key, value);
          cfg.*member = *v;
        }
      },
      field->member);
}

std::string render(const ExperimentConfig &cfg, const Field &field) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(cfg.*member);
        } else if constexpr (std::is_same_v<T, bool>) {
          return cfg.*member ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return cfg.*member;
        } else {
          return std::to_string(cfg.*member);
        }
      },
      field.member);
}

void require(bool ok, const char *key, const std::string &message) {
  if (!ok) throw ConfigError(key, message);
}

bool in_closed(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 'key = value'");
    }
    assign(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ExperimentConfig validate_config(const ExperimentConfig &cfg) {
  require(cfg.num_clients >= 1, "num_clients", "num_clients must be >= 1");
  require(cfg.num_clusters >= 1, "num_clusters", "num_clusters must be >= 1");
  require(cfg.num_clusters <= cfg.num_clients, "num_clusters",
          "K exceeds C (num_clusters > num_clients)");
  require(cfg.rounds >= 0, "rounds", "rounds must be >= 0");
  require(cfg.local_epochs >= 0, "local_epochs", "local_epochs must be >= 0");
  require(cfg.recluster_interval >= 0, "recluster_interval",
          "recluster_interval must be >= 0");
  require(cfg.gs_interval >= 1, "gs_interval", "gs_interval must be >= 1");
  require(cfg.gs_epochs >= 0, "gs_epochs", "gs_epochs must be >= 0");
  require(cfg.selection_window >= 1, "selection_window",
          "selection_window must be >= 1");
  require(cfg.kmeans_max_iters >= 1, "kmeans_max_iters",
          "kmeans_max_iters must be >= 1");
  require(cfg.confidence > 0.0 && cfg.confidence < 1.0, "confidence",
          "confidence threshold out of (0,1)");
  require(cfg.beta_param > 0.0, "beta_param", "beta_param must be > 0");
  require(in_closed(cfg.loss_weight, 0.0, 1.0), "loss_weight",
          "loss_weight out of [0,1]");
  require(in_closed(cfg.cluster_weight, 0.0, 1.0), "cluster_weight",
          "cluster_weight out of [0,1]");
  require(cfg.selection_rate > 0.0 && cfg.selection_rate <= 1.0,
          "selection_rate", "selection rate out of (0,1]");
  require(cfg.selection_rate * cfg.num_clients / cfg.num_clusters >= 1.0,
          "selection_rate",
          "selection rate leaves no selectable participant per cluster "
          "(selection_rate * num_clients / num_clusters < 1)");
  require(cfg.learning_rate > 0.0, "learning_rate",
          "learning_rate must be > 0");
  require(cfg.batch_size >= 1, "batch_size", "batch_size must be >= 1");
  require(in_closed(cfg.momentum, 0.0, 1.0), "momentum",
          "momentum out of [0,1]");
  require(cfg.sparsity_ratio > 0.0 && cfg.sparsity_ratio <= 1.0,
          "sparsity_ratio", "sparsity_ratio out of (0,1]");
  require(cfg.gradient_threshold > 0.0, "gradient_threshold",
          "gradient_threshold must be > 0");
  require(cfg.altitude_km > 0.0, "altitude_km", "altitude_km must be > 0");
  require(in_closed(cfg.inclination_deg, 0.0, 180.0), "inclination_deg",
          "inclination_deg out of [0,180]");
  require(cfg.num_planes >= 1, "num_planes", "num_planes must be >= 1");
  require(cfg.carrier_hz > 0.0, "carrier_hz", "carrier_hz must be > 0");
  require(cfg.bandwidth_hz > 0.0, "bandwidth_hz", "bandwidth_hz must be > 0");
  require(std::isfinite(cfg.tx_power_dbw), "tx_power_dbw",
          "tx_power_dbw must be finite");
  require(std::isfinite(cfg.noise_density_dbm_hz), "noise_density_dbm_hz",
          "noise_density_dbm_hz must be finite");
  require(cfg.cpu_freq_hz > 0.0, "cpu_freq_hz", "cpu_freq_hz must be > 0");
  require(cfg.cpu_freq_spread >= 0.0 && cfg.cpu_freq_spread < 1.0,
          "cpu_freq_spread", "cpu_freq_spread out of [0,1)");
  require(cfg.cycles_per_sample > 0.0, "cycles_per_sample",
          "cycles_per_sample must be > 0");
  require(cfg.energy_coefficient >= 0.0, "energy_coefficient",
          "energy_coefficient must be >= 0");
  require(cfg.aggregation_delay_s >= 0.0, "aggregation_delay_s",
          "aggregation_delay_s must be >= 0");
  require(in_closed(cfg.gs_lat_deg, -90.0, 90.0), "gs_lat_deg",
          "gs_lat_deg out of [-90,90]");
  require(in_closed(cfg.gs_lon_deg, -180.0, 180.0), "gs_lon_deg",
          "gs_lon_deg out of [-180,180]");
  require(cfg.model == "mlp" || cfg.model == "logistic", "model",
          "model must be 'mlp' or 'logistic'");
  require(cfg.hidden_units >= 1, "hidden_units", "hidden_units must be >= 1");
  require(in_closed(cfg.flip_prob, 0.0, 1.0), "flip_prob",
          "flip_prob out of [0,1]");
  require(in_closed(cfg.shift_fraction, 0.0, 0.5), "shift_fraction",
          "shift_fraction out of [0,0.5]");
  require(cfg.noise_scale >= 0.0, "noise_scale", "noise_scale must be >= 0");
  require(in_closed(cfg.cutout_fraction, 0.0, 1.0), "cutout_fraction",
          "cutout_fraction out of [0,1]");
  require(cfg.num_classes >= 2 && cfg.num_classes <= 254, "num_classes",
          "num_classes out of [2,254]");
  require(cfg.samples_per_class >= 0, "samples_per_class",
          "samples_per_class must be >= 0");
  require(cfg.separation > 0.0, "separation", "separation must be > 0");
  require(cfg.eval_fraction >= 0.0 && cfg.eval_fraction < 1.0,
          "eval_fraction", "eval_fraction out of [0,1)");
  require(cfg.labeled_fraction > 0.0 && cfg.labeled_fraction < 1.0,
          "labeled_fraction", "labeled_fraction out of (0,1)");
  require(in_closed(cfg.designated_fraction, 0.0, 1.0), "designated_fraction",
          "designated_fraction out of [0,1]");
  require(cfg.threads >= 1, "threads", "threads must be >= 1");
  require(in_closed(cfg.stop_at_accuracy, 0.0, 1.0), "stop_at_accuracy",
          "stop_at_accuracy out of [0,1]");
  return cfg;
}

void apply_override(ExperimentConfig &cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("", "override '" + std::string(assignment) +
                              "' is not key=value");
  }
  assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const ExperimentConfig &cfg) {
  std::string out;
  for (const auto &field : kFields) {
    out += field.key;
    out += " = ";
    out += render(cfg, field);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  keys.reserve(kFields.size());
  for (const auto &f : kFields) keys.emplace_back(f.key);
  return keys;
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

double dbm_per_hz_to_watts_per_hz(double dbm_per_hz) {
  return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

}  // namespace orbitfl
