#include "bsskit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "bsskit/analysis.hpp"
#include "bsskit/config.hpp"
#include "bsskit/csv.hpp"
#include "bsskit/errors.hpp"
#include "bsskit/fsl.hpp"
#include "bsskit/optimizer.hpp"
#include "bsskit/simulator.hpp"
#include "bsskit/svg.hpp"

namespace bss {

namespace {

// unified schema: any command accepts any known section, uses what it needs
const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"problem", {"s", "beta", "sigma", "eta", "dim"}},
        {"schedule", {"kind", "B", "D", "B1", "B2", "P", "D0", "alpha", "nu", "path"}},
        {"run", {"seed", "repeats", "eval_every", "grid_step", "theta0"}},
        {"sweep",
         {"plan_source", "evaluator", "D_list", "D0_list", "repeats", "alpha", "nu", "B_min",
          "tail_average"}},
        {"optimize", {"D", "B_min", "B_max_cap", "method"}},
        {"switch", {"B1", "B2", "D", "D_list"}},
        {"catchup",
         {"mode", "T", "switch_frac", "B1", "B2", "epsilon", "delta_min", "delta_max", "repeats",
          "eval_every"}},
    };
    return schema;
}

Config load(const std::string& path) {
    Config cfg = Config::parse_file(path);
    cfg.restrict(config_schema());
    return cfg;
}

std::uint64_t run_seed(const Config& cfg, const CliOverrides& ov) {
    if (ov.seed) return *ov.seed;
    return static_cast<std::uint64_t>(cfg.get_int_or("run", "seed", 42));
}

struct TGrid {
    std::vector<double> times;
};

TGrid parse_t_grid(const std::string& spec, double horizon) {
    TGrid g;
    if (spec.empty()) {
        const int n = 256;
        for (int i = 1; i <= n; ++i)
            g.times.push_back(horizon * static_cast<double>(i) / n);
        return g;
    }
    // lin:<a>:<b>:<n> or log:<a>:<b>:<n>
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log"))
        throw ConfigError("--t-grid must look like lin:<a>:<b>:<n> or log:<a>:<b>:<n>");
    const double a = std::strtod(parts[1].c_str(), nullptr);
    const double b = std::strtod(parts[2].c_str(), nullptr);
    const long n = std::strtol(parts[3].c_str(), nullptr, 10);
    if (!(a > 0.0) || !(b > a) || n < 2) throw ConfigError("--t-grid: need 0 < a < b and n >= 2");
    if (b > horizon * (1.0 + 1e-9))
        throw ConfigError("--t-grid extends past the schedule horizon");
    for (long i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        g.times.push_back(parts[0] == "lin" ? a + (b - a) * f : a * std::pow(b / a, f));
    }
    return g;
}

double default_grid_step(const Config& cfg, double horizon) {
    const double step = cfg.get_double_or("run", "grid_step", 0.0);
    return step > 0.0 ? step : horizon / 4096.0;
}

}  // namespace

std::string cmd_fsl_eval(const std::string& config_path, const std::string& out_path,
                         const std::string& predictor, const std::string& t_grid,
                         const CliOverrides& ov) {
    const Config cfg = load(config_path);
    ProblemSpec probe = problem_from_config(cfg);  // dim resolved below for spectral predictors
    const ScheduleSpec ss = schedule_spec_from_config(cfg);
    const Schedule schedule = build_continuous_schedule(ss, probe);
    const double horizon = schedule.duration();

    const ProblemSpec spec = problem_from_config(cfg, fsl_loss(probe, schedule, horizon));
    const TGrid grid = parse_t_grid(t_grid, horizon);

    Trajectory tr;
    if (predictor == "simplified") {
        tr.kind = TrajectoryKind::SimplifiedFsl;
        tr.times = grid.times;
        for (double t : grid.times) tr.losses.push_back(fsl_loss(spec, schedule, t));
        tr.meta.spec_hash = spec.content_hash();
        tr.meta.schedule_hash = schedule.content_hash();
        tr.validate();
    } else {
        const double step = default_grid_step(cfg, horizon);
        if (predictor == "volterra")
            tr = volterra_solve(spec, schedule, step);
        else if (predictor == "ode-lower")
            tr = moment_ode(spec, schedule, MomentVariant::Lower, step);
        else if (predictor == "ode-upper")
            tr = moment_ode(spec, schedule, MomentVariant::Upper, step);
        else
            throw ConfigError("--predictor must be simplified, volterra, ode-lower or ode-upper");
        if (!t_grid.empty()) {
            Trajectory sampled;
            sampled.kind = tr.kind;
            sampled.meta = tr.meta;
            sampled.times = grid.times;
            for (double t : grid.times) sampled.losses.push_back(tr.interpolate(t));
            sampled.validate();
            tr = std::move(sampled);
        }
    }
    (void)ov;
    write_text_file(out_path, trajectory_csv(tr));
    return "wrote " + out_path + " (" + std::to_string(tr.times.size()) + " points, " +
           to_string(tr.kind) + ")\n";
}

std::string cmd_simulate(const std::string& config_path, const std::string& out_path,
                         const CliOverrides& ov) {
    const Config cfg = load(config_path);
    ProblemSpec probe = problem_from_config(cfg);
    const ScheduleSpec ss = schedule_spec_from_config(cfg);
    const Schedule continuous = build_continuous_schedule(ss, probe);
    const ProblemSpec spec =
        problem_from_config(cfg, fsl_loss(probe, continuous, continuous.duration()));

    RunConfig rc;
    rc.spec = spec;
    rc.schedule = build_discrete_schedule(ss, spec);
    rc.seed = run_seed(cfg, ov);
    rc.eval_every = cfg.get_int_or("run", "eval_every", 1);
    rc.repeats = static_cast<int>(cfg.get_int_or("run", "repeats", 1));
    const std::string init = cfg.get_string_or("run", "theta0", "zero");
    if (init == "zero")
        rc.init = InitMode::Zero;
    else if (init == "star")
        rc.init = InitMode::TargetDebug;
    else
        throw ConfigError("[run] theta0 must be `zero` or `star`");

    const Trajectory tr =
        rc.repeats == 1 ? run_sgd(rc) : run_sgd_averaged(rc, ov.threads);
    write_text_file(out_path, trajectory_csv(tr));
    return "wrote " + out_path + " (" + std::to_string(tr.times.size()) + " checkpoints, " +
           std::to_string(rc.repeats) + " repeats, data=" +
           std::to_string(rc.schedule.total_samples()) + ")\n";
}

std::string cmd_optimize(const std::string& config_path, const std::string& out_path,
                         const std::string& method_override, const CliOverrides& ov) {
    (void)ov;
    const Config cfg = load(config_path);
    const ProblemSpec spec = problem_from_config(cfg);
    const double data_budget = cfg.get_double("optimize", "D");
    const double b_min = cfg.get_double_or("optimize", "B_min", 1.0);
    const double cap = cfg.get_double_or("optimize", "B_max_cap", 0.0);
    std::string method = method_override.empty()
                             ? cfg.get_string_or("optimize", "method", "closed")
                             : method_override;
    OptimalPlan plan = [&]() {
        if (method == "closed") return closed_form_plan(spec, data_budget, b_min);
        if (method == "kkt")
            return numeric_kkt_plan(spec, data_budget, b_min,
                                    cap > 0.0 ? std::optional<double>(cap) : std::nullopt);
        throw ConfigError("method must be `closed` or `kkt`");
    }();
    write_text_file(out_path, format_plan(plan));
    return "wrote " + out_path + " (regime=" + std::string(to_string(plan.regime)) +
           ", method=" + to_string(plan.method) + ", T_star=" + fmt_g(plan.T_star) + ")\n";
}

std::string cmd_switch(const std::string& config_path, const std::string& out_path,
                       const CliOverrides& ov) {
    (void)ov;
    const Config cfg = load(config_path);
    const ProblemSpec spec = problem_from_config(cfg);
    const double b1 = cfg.get_double("switch", "B1");
    const double b2 = cfg.get_double("switch", "B2");

    if (cfg.has("switch", "D_list")) {
        const std::vector<double> budgets = cfg.get_double_list("switch", "D_list");
        std::string csv = "D,P_star,D_minus_P_star,loss\n";
        std::vector<double> xs, ys;
        for (double d : budgets) {
            const SwitchSolution sol = optimal_switch(spec, d, b1, b2);
            csv += fmt_g(d) + "," + fmt_g(sol.P_star) + "," + fmt_g(d - sol.P_star) + "," +
                   fmt_g(sol.loss_at_optimum) + "\n";
            if (d - sol.P_star > 0.0) {
                xs.push_back(d);
                ys.push_back(d - sol.P_star);
            }
        }
        write_text_file(out_path, csv);
        std::string report = "wrote " + out_path + "\n";
        if (regime(spec) == Regime::Easy) {
            report += "regime=Easy: P* = 0 expected at every D; switch-point fit undefined\n";
        } else if (xs.size() >= 2) {
            report += "fit of log(D - P*) vs log D: " + fit_summary(powerlaw_fit(xs, ys));
        } else {
            report += "fit underdetermined: fewer than 2 interior optima\n";
        }
        return report;
    }

    const double d = cfg.get_double("switch", "D");
    const SwitchSolution sol = optimal_switch(spec, d, b1, b2);
    std::string csv = "P,loss\n";
    for (const auto& [p, l] : sol.loss_curve) csv += fmt_g(p) + "," + fmt_g(l) + "\n";
    write_text_file(out_path, csv);
    std::string report = "wrote " + out_path + "\n";
    report += "P_star=" + fmt_g(sol.P_star) + "\n";
    report += "loss_at_optimum=" + fmt_g(sol.loss_at_optimum) + "\n";
    report += "stationarity_residual=";
    report += sol.stationarity_applicable ? fmt_g(sol.stationarity_residual)
                                          : std::string("0 (inapplicable: boundary optimum)");
    report += "\n";
    if (sol.flat_optimum) report += "flat_optimum=1 (earliest switch returned)\n";
    return report;
}

std::string cmd_sweep(const std::string& config_path, const std::string& out_path,
                      const CliOverrides& ov) {
    const Config cfg = load(config_path);
    const ProblemSpec spec = problem_from_config(cfg);

    const std::string source_name = cfg.get_string("sweep", "plan_source");
    PlanSource source;
    std::vector<double> scales;
    if (source_name == "b2") {
        source = PlanSource::AppendixB2;
        scales = cfg.get_double_list("sweep", "D0_list");
    } else if (source_name == "closed" || source_name == "kkt") {
        source = source_name == "closed" ? PlanSource::ClosedForm : PlanSource::NumericKkt;
        scales = cfg.get_double_list("sweep", "D_list");
    } else {
        throw ConfigError("[sweep] plan_source must be b2, closed or kkt");
    }

    SweepOptions opt;
    const std::string eval_name = cfg.get_string("sweep", "evaluator");
    if (eval_name == "mc")
        opt.evaluator = SweepEvaluator::MonteCarlo;
    else if (eval_name == "volterra")
        opt.evaluator = SweepEvaluator::Volterra;
    else
        throw ConfigError("[sweep] evaluator must be mc or volterra");
    opt.repeats = static_cast<int>(cfg.get_int_or("sweep", "repeats", 100));
    opt.seed = run_seed(cfg, ov);
    opt.grid_step = cfg.get_double_or("run", "grid_step", 0.0);
    opt.alpha = cfg.get_double_or("sweep", "alpha", source == PlanSource::AppendixB2 &&
                                                             regime(spec) != Regime::Easy
                                                         ? 1.0
                                                         : 1000.0);
    opt.nu = cfg.get_double_or("sweep", "nu", 10.0);
    opt.b_min = cfg.get_double_or("sweep", "B_min", 1.0);
    opt.tail_average = cfg.get_int_or("sweep", "tail_average", 0) != 0;
    opt.n_threads = ov.threads;
    if (!problem_dim_is_auto(cfg)) opt.dim_override = cfg.get_int("problem", "dim");

    const SweepResult res = rate_sweep(spec, scales, source, opt);
    write_text_file(out_path, sweep_csv(res.points));
    return "wrote " + out_path + "\n" + fit_summary(res.fit);
}

std::string cmd_catchup(const std::string& config_path, const std::string& out_path,
                        const CliOverrides& ov) {
    const Config cfg = load(config_path);
    const ProblemSpec spec = problem_from_config(cfg);
    const std::string mode = cfg.get_string_or("catchup", "mode", "theory");
    const double horizon = cfg.get_double("catchup", "T");
    const double frac = cfg.get_double_or("catchup", "switch_frac", 0.7);
    const double b1 = cfg.get_double_or("catchup", "B1", 1.0);
    const double b2 = cfg.get_double_or("catchup", "B2", 2.0);
    const double epsilon = cfg.get_double_or("catchup", "epsilon", 0.05);
    if (!(frac > 0.0 && frac < 1.0)) throw ConfigError("[catchup] switch_frac must be in (0,1)");
    if (!(b1 < b2)) throw ConfigError("[catchup] need B1 < B2");
    const double t_star = frac * horizon;
    const double delta_min = cfg.get_double_or("catchup", "delta_min", 2.0);
    const double delta_max = cfg.get_double_or("catchup", "delta_max", 0.02 * t_star);

    // switched: B1 up to t*, then B2; baseline: constant B2 for the same horizon
    const double switched_budget = b1 * t_star + b2 * (horizon - t_star);
    const Schedule switched_sched = Schedule::two_stage(b1, b2, switched_budget, b1 * t_star);
    const Schedule baseline_sched = Schedule::constant(b2, b2 * horizon);

    Trajectory switched, baseline;
    if (mode == "theory") {
        // shared grid: coarse up to t*, log-spaced deltas after it
        std::vector<double> times;
        for (int i = 1; i <= 32; ++i) times.push_back(t_star * static_cast<double>(i) / 32.0);
        const double d_lo = std::min(delta_min * 0.25, (horizon - t_star) * 1e-3);
        const double d_hi = horizon - t_star;
        for (int i = 0; i <= 512; ++i)
            times.push_back(t_star + d_lo * std::pow(d_hi / d_lo, static_cast<double>(i) / 512.0));
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        switched.kind = baseline.kind = TrajectoryKind::SimplifiedFsl;
        switched.times = baseline.times = times;
        for (double t : times) {
            switched.losses.push_back(fsl_loss(spec, switched_sched, t));
            baseline.losses.push_back(fsl_loss(spec, baseline_sched, t));
        }
        switched.validate();
        baseline.validate();
    } else if (mode == "mc") {
        const int repeats = static_cast<int>(cfg.get_int_or("catchup", "repeats", 200));
        const std::int64_t eval_every = cfg.get_int_or("catchup", "eval_every", 20);
        RunConfig rc;
        rc.spec = spec;
        rc.seed = run_seed(cfg, ov);
        rc.eval_every = eval_every;
        rc.repeats = repeats;
        rc.schedule = discretize(switched_sched, spec.eta);
        switched = run_sgd_averaged(rc, ov.threads);
        rc.schedule = discretize(baseline_sched, spec.eta);
        baseline = run_sgd_averaged(rc, ov.threads);
    } else {
        throw ConfigError("[catchup] mode must be theory or mc");
    }

    const double g_star = catchup_gap(spec, b1, b2);
    const CatchupReport rep =
        measure_catchup(switched, baseline, t_star, epsilon, delta_min, delta_max, g_star);

    std::string csv = "delta,gap\n";
    for (std::size_t i = 0; i < rep.fit_deltas.size(); ++i)
        csv += fmt_g(rep.fit_deltas[i]) + "," + fmt_g(rep.fit_gaps[i]) + "\n";
    write_text_file(out_path, csv);

    std::string report = "wrote " + out_path + "\n";
    report += "gap_predicted=" + fmt_g(rep.gap_predicted) + "\n";
    report += "gap_measured=" + fmt_g(rep.gap_measured) + "\n";
    report += "decay_exponent_predicted=" + fmt_g(-(1.0 - 1.0 / spec.beta)) + "\n";
    if (rep.fit_underdetermined)
        report += "decay_fit=underdetermined (gap below noise floor)\n";
    else
        report += "decay_fit: " + fit_summary(rep.decay_fit);
    report += "delta_eps=" + fmt_g(rep.delta_eps) +
              (rep.delta_eps_reached ? "\n" : " (not reached)\n");
    report += "delta_eps_predicted_scale=" + fmt_g(catchup_time_prediction(spec, t_star)) + "\n";
    report += "final_losses: switched=" + fmt_g(switched.final_loss()) +
              " baseline=" + fmt_g(baseline.final_loss()) + "\n";
    return report;
}

std::string cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_path,
                     bool loglog) {
    if (csv_paths.empty()) throw ConfigError("plot: need at least one CSV path");
    std::vector<PlotSeries> series;
    PlotOptions opt;
    opt.loglog = loglog;
    for (const auto& path : csv_paths) {
        const CsvTable table = read_csv(path);
        if (table.columns.size() < 2) throw ConfigError("plot: `" + path + "` has fewer than 2 columns");
        PlotSeries s;
        s.label = std::filesystem::path(path).filename().string();
        for (const auto& row : table.rows) {
            if (std::isnan(row[0]) || std::isnan(row[1])) continue;
            s.xs.push_back(row[0]);
            s.ys.push_back(row[1]);
        }
        if (s.xs.empty()) throw ConfigError("plot: `" + path + "` has no plottable rows");
        opt.x_label = table.columns[0];
        opt.y_label = table.columns[1];
        series.push_back(std::move(s));
    }
    if (loglog) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < series[0].xs.size(); ++i) {
            if (series[0].xs[i] > 0 && series[0].ys[i] > 0) {
                xs.push_back(series[0].xs[i]);
                ys.push_back(series[0].ys[i]);
            }
        }
        if (xs.size() >= 2) {
            const FitResult f = powerlaw_fit(xs, ys);
            opt.annotation = "slope=" + fmt_g(f.slope);
        }
    }
    write_text_file(out_path, render_svg(series, opt));
    return "wrote " + out_path + "\n";
}

}  // namespace bss
