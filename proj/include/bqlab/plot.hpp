#pragma once

// Static SVG plots: scatter/line series on linear or logarithmic axes.

#include <string>
#include <vector>

namespace bq::plot {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    bool markers = true; // false: polyline only
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/// Complete SVG document. Non-positive values are dropped on log axes.
std::string render_svg(const PlotSpec& spec);

/// Throws std::runtime_error if the file cannot be written.
void write_svg(const std::string& path, const PlotSpec& spec);

} // namespace bq::plot
