#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modelavg::cli {

enum class LineStyle { Solid, Dashed, Dotted, DotDash };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  ///< non-finite values break the line
    LineStyle style = LineStyle::Solid;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
};

/// Standalone SVG line chart with axes, ticks and a legend.
void write_svg(std::ostream& out, const PlotSpec& plot);

} // namespace modelavg::cli
