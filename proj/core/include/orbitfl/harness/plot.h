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
#include <vector>

#include "orbitfl/aggregation/orchestrator.h"

namespace orbitfl::harness {

struct Series {
  std::string name;
  std::vector<double> y;  // one value per x
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Series> series;
};

//! Plot area in SVG user units.
inline constexpr double kPlotLeft = 70.0;
inline constexpr double kPlotTop = 30.0;
inline constexpr double kPlotWidth = 520.0;
inline constexpr double kPlotHeight = 300.0;

//! Axis range: data extent padded by 5% of its span on each side. A zero
//! span is padded by 5% of |value|, or by 1 when the value is 0.
std::pair<double, double> axis_range(double lo, double hi);

/*! Self-contained SVG line chart, one polyline per series. The root
 * element carries data-x-min/max and data-y-min/max attributes holding
 * the axis range, and each polyline has data-series set to its name.
 */
std::string render_svg(const Chart &chart);

//! The four charts of a run: accuracy, loss, cumulative energy, bytes.
std::vector<std::pair<std::string, Chart>> metrics_charts(
    const std::vector<aggregation::RoundMetrics> &rows);

/*! Writes accuracy.svg, loss.svg, energy.svg and bytes.svg into dir.
 * Returns the written paths; returns none when rows is empty.
 */
std::vector<std::filesystem::path> emit_plots(
    const std::vector<aggregation::RoundMetrics> &rows,
    const std::filesystem::path &dir);

}  // namespace orbitfl::harness
