// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace cswarm {

/// Shortest exact decimal for a double ("%.17g"), stable across runs.
std::string fmt_g17(double v);
/// Fixed human-facing formatting helpers.
std::string fmt_sig(double v, int digits);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Minimal static SVG line chart: one polyline per series over a shared x
/// axis, with axis box and labels. Deterministic output.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series, const std::string& x_label,
                     const std::string& y_label);

}  // namespace cswarm
