#pragma once

#include <string>
#include <vector>

namespace gpckit {

/// One polyline of a chart: a named series over a shared x axis.
struct PlotSeries {
    std::string label;
    std::vector<double> y;
};

/// Renders a deterministic SVG line chart (fixed canvas, fixed palette;
/// identical input gives identical bytes). Throws std::invalid_argument on
/// empty input.
std::string render_line_chart(const std::string& title, const std::vector<double>& x,
                              const std::vector<PlotSeries>& series);

}  // namespace gpckit
