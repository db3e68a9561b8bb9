#pragma once

#include <string>
#include <vector>

#include "bsskit/analysis.hpp"
#include "bsskit/trajectory.hpp"

namespace bss {

// canonical number formatting shared by every emitter (%.12g)
std::string fmt_g(double x);

// t,loss,stderr,kind  (stderr column left empty unless present)
std::string trajectory_csv(const Trajectory& tr);

// D,final_loss,stderr
std::string sweep_csv(const std::vector<SweepPoint>& points);

// slope=…, intercept=…, r2=…, n=…
std::string fit_summary(const FitResult& fit);

void write_text_file(const std::string& path, const std::string& content);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // numeric cells; blank -> NaN
};
CsvTable read_csv(const std::string& path);

}  // namespace bss
