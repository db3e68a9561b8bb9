#include "bsskit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bsskit/csv.hpp"
#include "bsskit/errors.hpp"

namespace bss {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
    if (series.empty()) throw ConfigError("render_svg: no series to plot");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.xs.size() != s.ys.size() || s.xs.empty())
            throw ConfigError("render_svg: series `" + s.label + "` is empty or ragged");
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            double x = s.xs[i], y = s.ys[i];
            if (opt.loglog && (x <= 0.0 || y <= 0.0))
                throw ConfigError("render_svg: log-log plot needs strictly positive data");
            if (opt.loglog) {
                x = std::log10(x);
                y = std::log10(y);
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double ml = 70, mr = 20, mt = 20, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    const auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    const auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  opt.width, opt.height, opt.width, opt.height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame + ticks
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double vx = opt.loglog ? std::pow(10.0, fx) : fx;
        const double vy = opt.loglog ? std::pow(10.0, fy) : fy;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                      px(fx), mt + ph + 16, fmt_g(vx).c_str());
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                      ml - 6, py(fy) + 4, fmt_g(vy).c_str());
        svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                  ml + pw / 2, static_cast<double>(opt.height) - 10.0, esc(opt.x_label).c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 14 %.1f)\">%s</text>\n",
                  mt + ph / 2, mt + ph / 2, esc(opt.y_label).c_str());
    svg += buf;

    int color = 0;
    double legend_y = mt + 16;
    for (const auto& s : series) {
        const char* col = kColors[color % 8];
        std::string pts;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            const double x = opt.loglog ? std::log10(s.xs[i]) : s.xs[i];
            const double y = opt.loglog ? std::log10(s.ys[i]) : s.ys[i];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            pts += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += col;
        svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      ml + 10, legend_y, col, esc(s.label).c_str());
        svg += buf;
        legend_y += 15;
        ++color;
    }
    if (!opt.annotation.empty()) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                      ml + pw - 8, mt + ph - 8, esc(opt.annotation).c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace bss
