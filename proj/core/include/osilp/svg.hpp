#pragma once
#include <string>
#include <vector>

// Self-contained SVG line plots. No external renderer: the output is a
// complete standalone <svg> document with axes, tick labels, optional
// confidence bands and a legend.

namespace osilp {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    // Optional band, either empty or the same length as x/y.
    std::vector<double> lo;
    std::vector<double> hi;
};

// log_x requests a log10 x axis; it silently falls back to linear when any
// x <= 0. A series with a single point renders as a marker, not a line.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool log_x = false);

}  // namespace osilp
