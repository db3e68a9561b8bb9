#pragma once

#include <string>
#include <vector>

namespace bss {

struct PlotSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

struct PlotOptions {
    bool loglog = false;
    std::string x_label = "x";
    std::string y_label = "y";
    std::string annotation;  // free-form text drawn in the corner
    int width = 720;
    int height = 480;
};

// Self-contained polyline chart; no external renderer.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace bss
