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
#include "orbitfl/harness/plot.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitfl/domain/format.h"
#include "orbitfl/harness/metrics.h"

namespace orbitfl::harness {

namespace {

constexpr const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_double(v); }

}  // namespace

std::pair<double, double> axis_range(double lo, double hi) {
  double pad = 0.05 * (hi - lo);
  if (pad == 0.0) pad = lo != 0.0 ? 0.05 * std::abs(lo) : 1.0;
  return {lo - pad, hi + pad};
}

std::string render_svg(const Chart &chart) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (double x : chart.x) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  for (const auto &s : chart.series) {
    for (double y : s.y) {
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (chart.x.empty()) x_lo = x_hi = 0.0;
  if (!std::isfinite(y_lo)) y_lo = y_hi = 0.0;
  const auto [ax0, ax1] = axis_range(x_lo, x_hi);
  const auto [ay0, ay1] = axis_range(y_lo, y_hi);
  auto px = [&](double x) { return kPlotLeft + (x - ax0) / (ax1 - ax0) * kPlotWidth; };
  auto py = [&](double y) {
    return kPlotTop + kPlotHeight - (y - ay0) / (ay1 - ay0) * kPlotHeight;
  };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
       "viewBox=\"0 0 640 400\" data-x-min=\"" + num(ax0) + "\" data-x-max=\"" +
       num(ax1) + "\" data-y-min=\"" + num(ay0) + "\" data-y-max=\"" + num(ay1) +
       "\">\n";
  s += "  <title>" + escape(chart.title) + "</title>\n";
  s += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "  <rect x=\"" + num(kPlotLeft) + "\" y=\"" + num(kPlotTop) +
       "\" width=\"" + num(kPlotWidth) + "\" height=\"" + num(kPlotHeight) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "  <text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(chart.title) + "</text>\n";
  s += "  <text x=\"" + num(kPlotLeft + kPlotWidth / 2) +
       "\" y=\"370\" text-anchor=\"middle\" font-size=\"12\">" +
       escape(chart.x_label) + "</text>\n";
  s += "  <text x=\"15\" y=\"" + num(kPlotTop + kPlotHeight / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 " +
       num(kPlotTop + kPlotHeight / 2) + ")\">" + escape(chart.y_label) +
       "</text>\n";
  // Tick labels at the data extents.
  s += "  <text x=\"" + num(px(x_lo)) + "\" y=\"" + num(kPlotTop + kPlotHeight + 15) +
       "\" text-anchor=\"middle\" font-size=\"10\">" + num(x_lo) + "</text>\n";
  s += "  <text x=\"" + num(px(x_hi)) + "\" y=\"" + num(kPlotTop + kPlotHeight + 15) +
       "\" text-anchor=\"middle\" font-size=\"10\">" + num(x_hi) + "</text>\n";
  s += "  <text x=\"" + num(kPlotLeft - 5) + "\" y=\"" + num(py(y_lo)) +
       "\" text-anchor=\"end\" font-size=\"10\">" + num(y_lo) + "</text>\n";
  s += "  <text x=\"" + num(kPlotLeft - 5) + "\" y=\"" + num(py(y_hi)) +
       "\" text-anchor=\"end\" font-size=\"10\">" + num(y_hi) + "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto &series = chart.series[k];
    std::string points;
    const std::size_t n = std::min(series.y.size(), chart.x.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i) points += ' ';
      points += num(px(chart.x[i])) + ',' + num(py(series.y[i]));
    }
    const char *color = kColors[k % std::size(kColors)];
    s += "  <polyline data-series=\"" + escape(series.name) +
         "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
         points + "\"/>\n";
    s += "  <text x=\"" + num(kPlotLeft + kPlotWidth - 5) + "\" y=\"" +
         num(kPlotTop + 15 + 14 * static_cast<double>(k)) +
         "\" text-anchor=\"end\" font-size=\"11\" fill=\"" + color + "\">" +
         escape(series.name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::vector<std::pair<std::string, Chart>> metrics_charts(
    const std::vector<aggregation::RoundMetrics> &rows) {
  std::vector<double> x, acc, loss, energy, up, down;
  double cumulative = 0.0;
  for (const auto &r : rows) {
    x.push_back(r.round);
    acc.push_back(r.accuracy);
    loss.push_back(r.loss);
    cumulative += r.e_tx_j + r.e_cmp_j;
    energy.push_back(cumulative);
    up.push_back(static_cast<double>(r.bytes_up));
    down.push_back(static_cast<double>(r.bytes_down));
  }
  std::vector<std::pair<std::string, Chart>> out;
  out.push_back({"accuracy.svg", Chart{"Global accuracy", "round", "accuracy", x,
                                       {Series{"accuracy", acc}}}});
  out.push_back({"loss.svg", Chart{"Evaluation loss", "round", "cross-entropy", x,
                                   {Series{"loss", loss}}}});
  out.push_back({"energy.svg", Chart{"Cumulative energy", "round", "joules", x,
                                     {Series{"e_tx + e_cmp", energy}}}});
  out.push_back({"bytes.svg", Chart{"Traffic per round", "round", "bytes", x,
                                    {Series{"bytes_up", up}, Series{"bytes_down", down}}}});
  return out;
}

std::vector<std::filesystem::path> emit_plots(
    const std::vector<aggregation::RoundMetrics> &rows,
    const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> written;
  if (rows.empty()) return written;
  for (const auto &[name, chart] : metrics_charts(rows)) {
    const auto path = dir / name;
    write_file_atomic(path, render_svg(chart));
    written.push_back(path);
  }
  return written;
}

}  // namespace orbitfl::harness
