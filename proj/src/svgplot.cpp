#include "gpckit/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace gpckit {

namespace {

constexpr int kWidth = 880;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::vector<double>& x,
                              const std::vector<PlotSeries>& series) {
    if (x.empty() || series.empty())
        throw std::invalid_argument("render_line_chart: nothing to plot");
    for (const auto& s : series)
        if (s.y.size() != x.size())
            throw std::invalid_argument("render_line_chart: series length mismatch");

    double xmin = x.front(), xmax = x.front();
    for (double v : x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    double ymin = series[0].y.front(), ymax = ymin;
    for (const auto& s : series)
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) { ymax += 0.5; ymin -= 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double v) { return kMarginTop + (ymax - v) / (ymax - ymin) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"16\">" << title << "</text>\n";

    // Frame and ticks.
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / nticks;
        const double fy = ymin + (ymax - ymin) * i / nticks;
        const double px = sx(fx);
        const double py = sy(fy);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << fmt(px)
           << "\" y2=\"" << kMarginTop + plot_h + 6 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << fmt(px) << "\" y=\"" << kMarginTop + plot_h + 22
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(fx)
           << "</text>\n";
        os << "<line x1=\"" << kMarginLeft - 6 << "\" y1=\"" << fmt(py) << "\" x2=\"" << kMarginLeft
           << "\" y2=\"" << fmt(py) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << fmt(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(fy)
           << "</text>\n";
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << ' ';
            os << fmt(sx(x[i])) << ',' << fmt(sy(series[si].y[i]));
        }
        os << "\"/>\n";
        // Legend entry.
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(si);
        os << "<line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << fmt(ly) << "\" x2=\""
           << kMarginLeft + plot_w - 120 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kMarginLeft + plot_w - 112 << "\" y=\"" << fmt(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[si].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gpckit
