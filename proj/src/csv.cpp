#include "bsskit/csv.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bsskit/errors.hpp"

namespace bss {

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "t,loss,stderr,kind\n";
    const char* kind = to_string(tr.kind);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out += fmt_g(tr.times[i]);
        out += ',';
        out += fmt_g(tr.losses[i]);
        out += ',';
        if (!tr.stderrs.empty()) out += fmt_g(tr.stderrs[i]);
        out += ',';
        out += kind;
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "D,final_loss,stderr\n";
    for (const auto& p : points) {
        out += fmt_g(p.data);
        out += ',';
        out += fmt_g(p.final_loss);
        out += ',';
        if (p.loss_stderr > 0.0) out += fmt_g(p.loss_stderr);
        out += '\n';
    }
    return out;
}

std::string fit_summary(const FitResult& fit) {
    std::string out = "slope=" + fmt_g(fit.slope);
    out += ", intercept=" + fmt_g(fit.intercept);
    out += ", r2=" + fmt_g(fit.r_squared);
    out += ", n=" + std::to_string(fit.n_points);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open `" + path + "` for writing");
    out << content;
    if (!out) throw ConfigError("failed writing `" + path + "`");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV `" + path + "`");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("CSV `" + path + "` is empty");
    {
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) table.columns.push_back(col);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            if (cell.empty()) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                row.push_back(end == cell.c_str() ? std::numeric_limits<double>::quiet_NaN() : v);
            }
        }
        row.resize(table.columns.size(), std::numeric_limits<double>::quiet_NaN());
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace bss
