// Command-line front end: predict, optimize and simulate batch-size
// schedules for one-pass SGD on power-law regression.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsskit/cli.hpp"
#include "bsskit/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch-size-schedule toolkit for one-pass SGD on power-law regression"};
    app.require_subcommand(1);

    bss::CliOverrides ov;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    app.add_option("--threads", ov.threads, "worker threads (default: all cores)");
    app.add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { seed_flag = v; seed_set = true; },
           "override [run] seed");

    std::string config, out, predictor = "simplified", t_grid, method;
    std::vector<std::string> csvs;
    bool loglog = false;

    auto* fsl = app.add_subcommand("fsl-eval", "evaluate a loss predictor on a time grid");
    fsl->add_option("config", config)->required();
    fsl->add_option("--out", out, "output CSV")->default_val("fsl_eval.csv");
    fsl->add_option("--predictor", predictor, "simplified | volterra | ode-lower | ode-upper");
    fsl->add_option("--t-grid", t_grid, "lin:<a>:<b>:<n> or log:<a>:<b>:<n>");

    auto* sim = app.add_subcommand("simulate", "run seeded one-pass SGD");
    sim->add_option("config", config)->required();
    sim->add_option("--out", out, "output CSV")->default_val("simulate.csv");

    auto* optc = app.add_subcommand("optimize", "compute an optimal batch-size plan");
    optc->add_option("config", config)->required();
    optc->add_option("--out", out, "output plan file")->default_val("plan.txt");
    optc->add_option("--method", method, "closed | kkt");

    auto* sw = app.add_subcommand("switch", "optimal two-stage switch point");
    sw->add_option("config", config)->required();
    sw->add_option("--out", out, "output CSV")->default_val("switch.csv");

    auto* sweep = app.add_subcommand("sweep", "data-budget sweep with a power-law fit");
    sweep->add_option("config", config)->required();
    sweep->add_option("--out", out, "output CSV")->default_val("sweep.csv");

    auto* catchup = app.add_subcommand("catchup", "post-switch gap decay analysis");
    catchup->add_option("config", config)->required();
    catchup->add_option("--out", out, "output CSV")->default_val("catchup.csv");

    auto* plot = app.add_subcommand("plot", "render CSV series to an SVG chart");
    plot->add_option("csv", csvs, "input CSV paths")->required();
    plot->add_option("--out", out, "output SVG")->default_val("plot.svg");
    plot->add_flag("--loglog", loglog, "log-log axes with a slope annotation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }
    if (seed_set) ov.seed = seed_flag;

    try {
        std::string report;
        if (*fsl)
            report = bss::cmd_fsl_eval(config, out, predictor, t_grid, ov);
        else if (*sim)
            report = bss::cmd_simulate(config, out, ov);
        else if (*optc)
            report = bss::cmd_optimize(config, out, method, ov);
        else if (*sw)
            report = bss::cmd_switch(config, out, ov);
        else if (*sweep)
            report = bss::cmd_sweep(config, out, ov);
        else if (*catchup)
            report = bss::cmd_catchup(config, out, ov);
        else if (*plot)
            report = bss::cmd_plot(csvs, out, loglog);
        std::fputs(report.c_str(), stdout);
        return kExitOk;
    } catch (const bss::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
