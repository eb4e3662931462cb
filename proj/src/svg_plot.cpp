/*
 * Copyright 2026 The driftwatch authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// SVG 1.1 rendering of a monitor series: each metric's total-drift curve is
// min-max normalized onto a shared [0, 1] axis (the scales of the raw
// metrics differ by orders of magnitude), drawn as a polyline with one
// circle marker per entry. Output is assembled with fixed 2-decimal
// coordinates so a given series always renders to identical bytes.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftwatch/format.hpp"
#include "driftwatch/io_formats.hpp"

namespace driftwatch {

namespace {

// Fixed per-metric stroke palette, cycled if a series ever carries more
// curves than colors.
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 170.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 90.0;

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string emit_drift_plot(const MonitorSeries& series,
                            const PlotOptions& options) {
  if (series.metrics.empty() || series.entries.empty()) {
    throw std::invalid_argument("emit_drift_plot: empty series");
  }
  for (const MonitorEntry& entry : series.entries) {
    if (entry.reports.size() != series.metrics.size()) {
      throw std::invalid_argument(
          "emit_drift_plot: entry report count does not match metrics");
    }
  }
  if (options.width <= kMarginLeft + kMarginRight ||
      options.height <= kMarginTop + kMarginBottom) {
    throw std::invalid_argument("emit_drift_plot: canvas too small");
  }

  const std::size_t metric_count = series.metrics.size();
  const std::size_t entry_count = series.entries.size();
  const double plot_left = kMarginLeft;
  const double plot_right = options.width - kMarginRight;
  const double plot_top = kMarginTop;
  const double plot_bottom = options.height - kMarginBottom;
  const double plot_width = plot_right - plot_left;
  const double plot_height = plot_bottom - plot_top;

  // Entry k -> x coordinate; a single entry sits centered.
  const auto x_at = [&](std::size_t k) {
    if (entry_count == 1) {
      return plot_left + plot_width / 2.0;
    }
    return plot_left + plot_width * static_cast<double>(k) /
                           static_cast<double>(entry_count - 1);
  };
  // Normalized value [0, 1] -> y coordinate (SVG y grows downward).
  const auto y_at = [&](double normalized) {
    return plot_bottom - plot_height * normalized;
  };

  std::vector<std::vector<double>> normalized(metric_count);
  std::vector<std::pair<double, double>> ranges(metric_count);
  for (std::size_t m = 0; m < metric_count; ++m) {
    std::vector<double> totals;
    totals.reserve(entry_count);
    for (const MonitorEntry& entry : series.entries) {
      totals.push_back(entry.reports[m].total);
    }
    const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
    ranges[m] = {*lo, *hi};
    normalized[m] = min_max_normalize(totals);
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(options.width) + "\" height=\"" + num(options.height) +
         "\" viewBox=\"0 0 " + num(options.width) + " " +
         num(options.height) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + num(options.width) +
         "\" height=\"" + num(options.height) + "\" fill=\"#ffffff\"/>\n";

  // Horizontal gridlines and y tick labels at 0, 0.25, ..., 1.
  for (int tick = 0; tick <= 4; ++tick) {
    const double value = static_cast<double>(tick) / 4.0;
    const double y = y_at(value);
    svg += "  <line x1=\"" + num(plot_left) + "\" y1=\"" + num(y) +
           "\" x2=\"" + num(plot_right) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + num(plot_left - 8.0) + "\" y=\"" + num(y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           format_fixed(value, 2) + "</text>\n";
  }

  // Axes.
  svg += "  <line x1=\"" + num(plot_left) + "\" y1=\"" + num(plot_top) +
         "\" x2=\"" + num(plot_left) + "\" y2=\"" + num(plot_bottom) +
         "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "  <line x1=\"" + num(plot_left) + "\" y1=\"" + num(plot_bottom) +
         "\" x2=\"" + num(plot_right) + "\" y2=\"" + num(plot_bottom) +
         "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "  <text x=\"" + num(plot_left - 44.0) + "\" y=\"" +
         num(plot_top + plot_height / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 " +
         num(plot_left - 44.0) + " " + num(plot_top + plot_height / 2.0) +
         ")\">normalized drift</text>\n";

  // X tick labels: the test-set labels, angled to stay legible.
  for (std::size_t k = 0; k < entry_count; ++k) {
    const double x = x_at(k);
    svg += "  <line x1=\"" + num(x) + "\" y1=\"" + num(plot_bottom) +
           "\" x2=\"" + num(x) + "\" y2=\"" + num(plot_bottom + 4.0) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "  <text x=\"" + num(x) + "\" y=\"" + num(plot_bottom + 16.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\" transform=\"rotate(-35 " + num(x) + " " +
           num(plot_bottom + 16.0) + ")\">" +
           escape_xml(series.entries[k].test_label) + "</text>\n";
  }

  // One polyline + markers per metric.
  for (std::size_t m = 0; m < metric_count; ++m) {
    const char* color = kPalette[m % kPaletteSize];
    std::string points;
    for (std::size_t k = 0; k < entry_count; ++k) {
      if (k != 0) {
        points.push_back(' ');
      }
      points += num(x_at(k)) + "," + num(y_at(normalized[m][k]));
    }
    svg += "  <polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t k = 0; k < entry_count; ++k) {
      svg += "  <circle cx=\"" + num(x_at(k)) + "\" cy=\"" +
             num(y_at(normalized[m][k])) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
  }

  // Optional alert threshold, mapped through the alert metric's min-max
  // scale (first metric when the alert metric is not plotted) and clamped
  // into the plot box.
  if (options.threshold.has_value()) {
    std::size_t scale_index = 0;
    for (std::size_t m = 0; m < metric_count; ++m) {
      if (series.metrics[m] == series.policy.alert_metric) {
        scale_index = m;
        break;
      }
    }
    const auto [lo, hi] = ranges[scale_index];
    double t = 0.0;
    if (hi > lo) {
      t = (*options.threshold - lo) / (hi - lo);
    } else {
      t = *options.threshold > lo ? 1.0 : 0.0;
    }
    t = std::clamp(t, 0.0, 1.0);
    svg += "  <line class=\"threshold\" x1=\"" + num(plot_left) + "\" y1=\"" +
           num(y_at(t)) + "\" x2=\"" + num(plot_right) + "\" y2=\"" +
           num(y_at(t)) +
           "\" stroke=\"#000000\" stroke-width=\"1\" "
           "stroke-dasharray=\"6,4\"/>\n";
  }

  // Legend, one swatch per metric.
  for (std::size_t m = 0; m < metric_count; ++m) {
    const char* color = kPalette[m % kPaletteSize];
    const double y = plot_top + 14.0 + 18.0 * static_cast<double>(m);
    svg += "  <line x1=\"" + num(plot_right + 12.0) + "\" y1=\"" + num(y) +
           "\" x2=\"" + num(plot_right + 34.0) + "\" y2=\"" + num(y) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "  <text x=\"" + num(plot_right + 40.0) + "\" y=\"" +
           num(y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape_xml(metric_name(series.metrics[m])) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace driftwatch
