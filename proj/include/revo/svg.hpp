// Copyright 2026 the revo contributors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "revo/sim.hpp"

namespace revo::sim {

/// Minimal line chart of mean propagation time vs client count, one series
/// per degree, log-10 horizontal axis. Only "mean" rows are plotted.
inline void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows) {
    std::map<std::uint32_t, std::vector<std::pair<double, double>>> series;
    double max_t = 0;
    double min_x = std::numeric_limits<double>::infinity(), max_x = 0;
    for (const auto& r : rows) {
        if (r.rep != "mean" || !std::isfinite(r.t_full)) continue;
        double x = std::log10(static_cast<double>(r.n));
        series[r.d].emplace_back(x, r.t_full);
        max_t = std::max(max_t, r.t_full);
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
    }
    const int width = 640, height = 420, margin = 60;
    const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
    if (series.empty() || max_t <= 0) max_t = 1;
    if (!std::isfinite(min_x) || max_x <= min_x) {
        min_x = 2;
        max_x = 6;
    }
    auto px = [&](double x) { return margin + (x - min_x) / (max_x - min_x) * plot_w; };
    auto py = [&](double t) { return height - margin - t / max_t * plot_h; };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";

    // Horizontal ticks at integer powers of ten.
    for (int e = static_cast<int>(std::ceil(min_x)); e <= static_cast<int>(max_x); ++e) {
        double x = px(e);
        out << "<line x1=\"" << x << "\" y1=\"" << height - margin << "\" x2=\"" << x
            << "\" y2=\"" << height - margin + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << height - margin + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        double t = max_t * i / 4.0;
        double y = py(t);
        out << "<line x1=\"" << margin - 5 << "\" y1=\"" << y << "\" x2=\"" << margin
            << "\" y2=\"" << y << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << margin - 8 << "\" y=\"" << y + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << std::fixed
            << std::setprecision(1) << t << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">clients</text>\n"
        << "<text x=\"16\" y=\"" << height / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << height / 2 << ")\">propagation time (s)</text>\n";

    int color_idx = 0;
    int legend_y = margin;
    for (auto& [d, points] : series) {
        std::sort(points.begin(), points.end());
        const char* color = colors[color_idx++ % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (auto [x, t] : points) out << px(x) << ',' << py(t) << ' ';
        out << "\"/>\n";
        for (auto [x, t] : points)
            out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(t)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << width - margin - 80 << "\" y=\"" << legend_y
            << "\" font-size=\"12\" fill=\"" << color << "\">d = " << d << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

}  // namespace revo::sim
