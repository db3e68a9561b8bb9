#include "bsskit/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "bsskit/errors.hpp"
#include "bsskit/fsl.hpp"
#include "bsskit/numerics.hpp"
#include "bsskit/optimizer.hpp"
#include "bsskit/simulator.hpp"

namespace bss {

FitResult powerlaw_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DomainError("powerlaw_fit: size mismatch");
    if (xs.size() < 2) throw DomainError("powerlaw_fit: need at least 2 points");
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw DomainError("powerlaw_fit: inputs must be strictly positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const OlsFit f = ols(lx.data(), ly.data(), static_cast<int>(lx.size()));
    return {f.slope, f.intercept, f.r_squared, static_cast<int>(lx.size())};
}

double catchup_gap(const ProblemSpec& spec, double b1, double b2) {
    if (!(b1 <= b2)) throw DomainError("catchup_gap: need B1 <= B2");
    return spec.eta * spec.sigma * spec.sigma * (1.0 / b1 - 1.0 / b2);
}

double catchup_decay_prediction(const ProblemSpec& spec, double g_star, double delta) {
    if (!(delta > 0.0)) throw DomainError("catchup_decay_prediction: delta must be > 0");
    return g_star * std::pow(delta, -(1.0 - 1.0 / spec.beta));
}

double catchup_time_prediction(const ProblemSpec& spec, double t_star) {
    if (!(t_star > 0.0)) throw DomainError("catchup_time_prediction: t_star must be > 0");
    return std::pow(t_star, spec.s / (1.0 - 1.0 / spec.beta));
}

CatchupReport measure_catchup(const Trajectory& switched, const Trajectory& baseline,
                              double t_star, double epsilon, double delta_min, double delta_max,
                              double gap_predicted) {
    switched.validate();
    baseline.validate();
    if (!(epsilon > 0.0)) throw DomainError("measure_catchup: epsilon must be > 0");
    if (!(t_star > 0.0)) throw DomainError("measure_catchup: t_star must be > 0");
    const double horizon = std::min(switched.times.back(), baseline.times.back());
    if (!(t_star < horizon)) throw DomainError("measure_catchup: t_star beyond the trajectories");
    delta_max = std::min(delta_max, horizon - t_star);
    if (!(delta_min > 0.0) || !(delta_min < delta_max))
        throw DomainError("measure_catchup: need 0 < delta_min < delta_max within the horizon");

    CatchupReport report;
    report.epsilon = epsilon;
    report.gap_predicted = gap_predicted;
    report.gap_measured = switched.interpolate(t_star) - baseline.interpolate(t_star);

    const bool has_se = !switched.stderrs.empty() || !baseline.stderrs.empty();
    const auto se_at = [&](const Trajectory& tr, double t) -> double {
        if (tr.stderrs.empty()) return 0.0;
        // nearest-point standard error is enough for the noise floor
        auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t);
        std::size_t i = static_cast<std::size_t>(it - tr.times.begin());
        if (i >= tr.times.size()) i = tr.times.size() - 1;
        return tr.stderrs[i];
    };

    // log-spaced deltas; both trajectories are interpolated onto them
    constexpr int kFitPoints = 96;
    std::vector<double> ds, gaps;
    const double lr = std::log(delta_max / delta_min);
    for (int i = 0; i < kFitPoints; ++i) {
        const double delta = delta_min * std::exp(lr * static_cast<double>(i) / (kFitPoints - 1));
        const double t = t_star + delta;
        const double gap = switched.interpolate(t) - baseline.interpolate(t);
        if (has_se) {
            const double s1 = se_at(switched, t), s2 = se_at(baseline, t);
            const double floor = 3.0 * std::sqrt(s1 * s1 + s2 * s2);
            if (gap <= floor) continue;
        } else if (gap <= 0.0) {
            continue;
        }
        ds.push_back(delta);
        gaps.push_back(gap);
    }
    if (ds.size() < 2) {
        report.fit_underdetermined = true;
    } else {
        report.decay_fit = powerlaw_fit(ds, gaps);
    }
    report.fit_deltas = std::move(ds);
    report.fit_gaps = std::move(gaps);

    // catch-up time: first grid time after t_star with switched <= (1+eps)*baseline
    report.delta_eps_reached = false;
    for (std::size_t i = 0; i < switched.times.size(); ++i) {
        const double t = switched.times[i];
        if (t <= t_star) continue;
        const double base = baseline.interpolate(t);
        if (switched.losses[i] <= (1.0 + epsilon) * base) {
            report.delta_eps = t - t_star;
            report.delta_eps_reached = true;
            break;
        }
    }
    if (!report.delta_eps_reached) report.delta_eps = horizon - t_star;
    return report;
}

namespace {

struct BuiltPlan {
    DiscreteSchedule discrete;   // for Monte-Carlo evaluation
    Schedule continuous;         // for the Volterra evaluator
    double data;                 // x-axis value: actual samples (discrete) or budget
    double predicted_loss;       // theorem-level prediction, for dim selection
};

BuiltPlan build_sweep_plan(const ProblemSpec& spec, double scale, PlanSource source,
                           const SweepOptions& opt) {
    switch (source) {
        case PlanSource::AppendixB2: {
            const DiscreteSchedule ds = regime(spec) == Regime::Easy
                                            ? appendix_b2_easy(scale, opt.alpha, opt.nu, spec)
                                            : appendix_b2_hard(scale, opt.alpha, opt.nu, spec);
            Schedule cont = to_piecewise_constant(ds);
            const double pred = fsl_loss(spec, cont, cont.duration());
            return {ds, std::move(cont), static_cast<double>(ds.total_samples()), pred};
        }
        case PlanSource::ClosedForm: {
            OptimalPlan plan = closed_form_plan(spec, scale, opt.b_min);
            DiscreteSchedule ds = discretize(plan.schedule, spec.eta);
            return {std::move(ds), std::move(plan.schedule), scale, plan.predicted_loss};
        }
        default: {
            OptimalPlan plan = numeric_kkt_plan(spec, scale, opt.b_min);
            DiscreteSchedule ds = discretize(plan.schedule, spec.eta);
            return {std::move(ds), std::move(plan.schedule), scale, plan.predicted_loss};
        }
    }
}

double tail_averaged_final(const Trajectory& tr) {
    const std::size_t n = tr.losses.size();
    const std::size_t k = std::max<std::size_t>(1, n / 50);  // last 2% of checkpoints
    double acc = 0.0;
    for (std::size_t i = n - k; i < n; ++i) acc += tr.losses[i];
    return acc / static_cast<double>(k);
}

}  // namespace

SweepResult rate_sweep(const ProblemSpec& spec, const std::vector<double>& scales,
                       PlanSource source, const SweepOptions& options) {
    spec.validate();
    if (scales.size() < 4) throw DomainError("rate_sweep: need at least 4 sweep points");
    const double lo = *std::min_element(scales.begin(), scales.end());
    const double hi = *std::max_element(scales.begin(), scales.end());
    if (!(hi / lo >= 10.0 * (1.0 - 1e-9)))
        throw DomainError("rate_sweep: sweep must span at least one decade");

    SweepResult result;
    result.points.resize(scales.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const BuiltPlan plan = build_sweep_plan(spec, scales[i], source, options);
        ProblemSpec run_spec = spec;
        run_spec.dim = options.dim_override > 0
                           ? options.dim_override
                           : recommended_dim(spec, plan.predicted_loss);
        SweepPoint pt;
        pt.data = plan.data;
        if (options.evaluator == SweepEvaluator::MonteCarlo) {
            RunConfig rc;
            rc.spec = run_spec;
            rc.schedule = plan.discrete;
            rc.seed = options.seed + i;  // independent per sweep point
            rc.eval_every = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(plan.discrete.batch_sizes.size()) / 64);
            rc.repeats = options.repeats;
            const Trajectory tr = run_sgd_averaged(rc, options.n_threads);
            pt.final_loss = options.tail_average ? tail_averaged_final(tr) : tr.final_loss();
            pt.loss_stderr = tr.stderrs.back();
        } else {
            const double horizon = plan.continuous.duration();
            const double step = options.grid_step > 0.0 ? options.grid_step : horizon / 4096.0;
            const Trajectory tr = volterra_solve(run_spec, plan.continuous, step);
            pt.final_loss = options.tail_average ? tail_averaged_final(tr) : tr.final_loss();
            pt.loss_stderr = 0.0;
        }
        result.points[i] = pt;
    }

    std::vector<double> xs, ys;
    for (const auto& p : result.points) {
        xs.push_back(p.data);
        ys.push_back(p.final_loss);
    }
    result.fit = powerlaw_fit(xs, ys);
    return result;
}

SweepResult switch_sweep(const ProblemSpec& spec, const std::vector<double>& data_budgets,
                         double b1, double b2) {
    spec.validate();
    if (regime(spec) == Regime::Easy)
        throw DomainError("switch_sweep: easy-regime spec has P* = 0, the fit is undefined");
    if (data_budgets.size() < 2) throw DomainError("switch_sweep: need at least 2 budgets");

    SweepResult result;
    std::vector<double> xs, ys;
    for (double d : data_budgets) {
        const SwitchSolution sol = optimal_switch(spec, d, b1, b2);
        const double remaining = d - sol.P_star;
        result.points.push_back({d, remaining, 0.0});
        xs.push_back(d);
        ys.push_back(remaining);
    }
    result.fit = powerlaw_fit(xs, ys);
    return result;
}

}  // namespace bss
