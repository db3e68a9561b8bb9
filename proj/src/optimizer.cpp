#include "bsskit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bsskit/errors.hpp"
#include "bsskit/fsl.hpp"
#include "bsskit/numerics.hpp"

namespace bss {

namespace {

double growth_exponent(const ProblemSpec& spec) { return 0.5 / spec.beta - 1.0; }

// integral of (u+1)^q for u in [0, span]
double growth_budget_unit(double span, double q) {
    return (std::pow(span + 1.0, q + 1.0) - 1.0) / (q + 1.0);
}

struct ClippedShape {
    double t_bmin = 0.0;  // b = B_min on [0, t_bmin)
    double t_bcap = 0.0;  // b = B_cap on (t_bcap, T]
    double budget = 0.0;
};

// budget of clip(C*(T-t+1)^q, bmin, bcap) over [0, T]
ClippedShape clipped_budget(double C, double T, double q, double bmin,
                            const std::optional<double>& bcap) {
    ClippedShape out;
    out.t_bmin = 0.0;
    if (C * std::pow(T + 1.0, q) < bmin) {
        // (T - t + 1) = (bmin/C)^(1/q) at the boundary
        out.t_bmin = std::min(T, T + 1.0 - std::pow(bmin / C, 1.0 / q));
        out.t_bmin = std::max(out.t_bmin, 0.0);
    }
    out.t_bcap = T;
    if (bcap && C > *bcap) {
        out.t_bcap = std::max(0.0, T + 1.0 - std::pow(*bcap / C, 1.0 / q));
        out.t_bcap = std::min(out.t_bcap, T);
    }
    if (out.t_bcap < out.t_bmin) out.t_bcap = out.t_bmin;  // fully clipped transition
    double acc = bmin * out.t_bmin;
    if (out.t_bcap > out.t_bmin) {
        const double ua = T - out.t_bmin + 1.0;
        const double ub = T - out.t_bcap + 1.0;
        acc += C * (std::pow(ua, q + 1.0) - std::pow(ub, q + 1.0)) / (q + 1.0);
    }
    if (bcap) acc += *bcap * (T - out.t_bcap);
    out.budget = acc;
    return out;
}

Schedule build_clipped(double C, double T, double q, double bmin,
                       const std::optional<double>& bcap, const ClippedShape& shape) {
    std::vector<Segment> segs;
    if (shape.t_bmin > 0.0) segs.push_back({0.0, shape.t_bmin, ConstantForm{bmin}});
    if (shape.t_bcap > shape.t_bmin)
        segs.push_back({shape.t_bmin, shape.t_bcap, PowerGrowthForm{C, T, q}});
    if (shape.t_bcap < T) segs.push_back({shape.t_bcap, T, ConstantForm{*bcap}});
    return Schedule(std::move(segs));
}

}  // namespace

const char* to_string(PlanMethod m) {
    return m == PlanMethod::ClosedForm ? "ClosedForm" : "NumericKKT";
}

OptimalPlan closed_form_plan(const ProblemSpec& spec, double data_budget, double b_min) {
    spec.validate();
    if (!(data_budget > 0.0)) throw DomainError("closed_form_plan: D must be > 0");
    if (!(b_min >= 1.0)) throw DomainError("closed_form_plan: B_min must be >= 1");
    const double q = growth_exponent(spec);
    const double sb = spec.s * spec.beta;
    const Regime reg = regime(spec);

    if (reg == Regime::Easy) {
        // pure growth; the hardware floor is asymptotically inactive here
        const double t_star = std::pow(data_budget, spec.beta / (1.0 + sb));
        const double b_max = data_budget * (q + 1.0) / (std::pow(t_star + 1.0, q + 1.0) - 1.0);
        const double b_at_zero = b_max * std::pow(t_star + 1.0, q);
        if (b_at_zero < 1.0)
            throw DomainError("closed_form_plan: D too small, easy-regime b(0) < 1");
        Segment seg{0.0, t_star, PowerGrowthForm{b_max, t_star, q}};
        OptimalPlan plan{Schedule({seg})};
        plan.data_budget = data_budget;
        plan.T_star = t_star;
        plan.T1_star = 0.0;
        plan.B_max = b_max;
        plan.regime = reg;
        plan.method = PlanMethod::ClosedForm;
        plan.predicted_loss = fsl_loss(spec, plan.schedule, t_star);
        return plan;
    }

    // hard (and boundary, routed through the same construction):
    // find T with  T1 + T2 = T,  T2 = T^(1-eps),  budget exact.
    const double eps = (1.0 - 1.0 / spec.beta - spec.s) / (2.0 - 1.0 / spec.beta);
    const auto mismatch = [&](double T) {
        const double t2 = std::pow(T, 1.0 - eps);
        const double growth_data = b_min * growth_budget_unit(t2, q);
        const double t1 = (data_budget - growth_data) / b_min;
        return t1 + t2 - T;
    };
    const double lo = 1.0;
    const double hi = 2.0 * data_budget / b_min + 2.0;
    if (!(mismatch(lo) > 0.0) || !(mismatch(hi) < 0.0))
        throw DomainError("closed_form_plan: infeasible, budget cannot be met with b >= B_min");
    const double t_star = bisect_root(mismatch, lo, hi, 1e-14, 300);
    const double t2 = std::pow(t_star, 1.0 - eps);
    const double t1 = t_star - t2;
    const double amp = b_min * std::pow(t2 + 1.0, -q);  // continuity at t1

    std::vector<Segment> segs;
    if (t1 > 0.0) segs.push_back({0.0, t1, ConstantForm{b_min}});
    segs.push_back({t1 > 0.0 ? t1 : 0.0, t_star, PowerGrowthForm{amp, t_star, q}});
    OptimalPlan plan{Schedule(std::move(segs))};
    plan.data_budget = data_budget;
    plan.T_star = t_star;
    plan.T1_star = t1;
    plan.B_max = amp;
    plan.regime = reg;
    plan.method = PlanMethod::ClosedForm;
    plan.boundary_flagged = reg == Regime::Boundary;
    plan.B_min = b_min;
    plan.predicted_loss = fsl_loss(spec, plan.schedule, t_star);
    return plan;
}

OptimalPlan numeric_kkt_plan(const ProblemSpec& spec, double data_budget, double b_min,
                             std::optional<double> b_max_cap) {
    spec.validate();
    if (!(data_budget > 0.0)) throw DomainError("numeric_kkt_plan: D must be > 0");
    if (!(b_min >= 1.0)) throw DomainError("numeric_kkt_plan: B_min must be >= 1");
    if (b_max_cap && !(*b_max_cap > b_min))
        throw DomainError("numeric_kkt_plan: B_max_cap must exceed B_min");
    const double q = growth_exponent(spec);

    // budget-matching amplitude for a given horizon; nullopt if T infeasible
    const auto solve_amplitude = [&](double T) -> std::optional<double> {
        if (b_min * T > data_budget * (1.0 + 1e-12)) return std::nullopt;
        if (b_max_cap && *b_max_cap * T < data_budget * (1.0 - 1e-12)) return std::nullopt;
        double lo_c = 0.0;  // budget -> B_min * T
        double hi_c = std::max(b_min, data_budget / T);
        for (int i = 0; i < 200; ++i) {
            if (clipped_budget(hi_c, T, q, b_min, b_max_cap).budget >= data_budget) break;
            hi_c *= 2.0;
        }
        for (int i = 0; i < 500; ++i) {
            const double mid = 0.5 * (lo_c + hi_c);
            const double bud = clipped_budget(mid, T, q, b_min, b_max_cap).budget;
            if (bud < data_budget)
                lo_c = mid;
            else
                hi_c = mid;
            if (std::abs(bud - data_budget) <= 1e-8 * data_budget && mid > 0.0) return mid;
        }
        return hi_c;
    };

    const auto objective = [&](double T) {
        const auto c = solve_amplitude(T);
        if (!c) return std::numeric_limits<double>::infinity();
        const auto shape = clipped_budget(*c, T, q, b_min, b_max_cap);
        const Schedule sched = build_clipped(*c, T, q, b_min, b_max_cap, shape);
        return fsl_loss(spec, sched, T);
    };

    const double t_lo = b_max_cap ? data_budget / *b_max_cap : 1.0;
    const double t_hi = data_budget / b_min;
    if (!(t_lo < t_hi)) throw DomainError("numeric_kkt_plan: empty horizon bracket");
    const double tol = std::max(1e-9 * (t_hi - t_lo), 1e-12);

    ScalarMin best = scan_then_golden(objective, t_lo, t_hi, 33, tol);
    bool fallback = false;
    if (!best.bracket_ok) {
        best = scan_then_golden(objective, t_lo, t_hi, 256, tol);
        fallback = true;
    }

    const double T = best.x;
    const auto c = solve_amplitude(T);
    if (!c) throw DomainError("numeric_kkt_plan: optimizer landed on an infeasible horizon");
    const auto shape = clipped_budget(*c, T, q, b_min, b_max_cap);
    Schedule sched = build_clipped(*c, T, q, b_min, b_max_cap, shape);
    OptimalPlan plan{std::move(sched)};
    plan.data_budget = data_budget;
    plan.T_star = T;
    plan.T1_star = shape.t_bmin;
    plan.B_max = std::min(*c, b_max_cap.value_or(*c));
    plan.regime = regime(spec);
    plan.method = PlanMethod::NumericKkt;
    plan.grid_fallback = fallback;
    plan.boundary_flagged = plan.regime == Regime::Boundary;
    plan.B_min = b_min;
    plan.predicted_loss = best.fx;
    return plan;
}

double two_stage_loss(const ProblemSpec& spec, double data_budget, double b1, double b2,
                      double p) {
    spec.validate();
    if (p < 0.0 || p > data_budget) throw DomainError("two_stage_loss: P outside [0, D]");
    if (b1 == b2) {
        const Schedule sched = Schedule::constant(b1, data_budget);
        return fsl_loss(spec, sched, sched.duration());
    }
    const Schedule sched = Schedule::two_stage(b1, b2, data_budget, p);
    return fsl_loss(spec, sched, sched.duration());
}

SwitchSolution optimal_switch(const ProblemSpec& spec, double data_budget, double b1, double b2) {
    spec.validate();
    if (!(b1 < b2)) throw DomainError("optimal_switch: need B1 < B2");
    if (!(data_budget > 0.0)) throw DomainError("optimal_switch: D must be > 0");

    const auto loss_at = [&](double p) { return two_stage_loss(spec, data_budget, b1, b2, p); };

    constexpr int kCoarse = 128;
    SwitchSolution sol;
    sol.loss_curve.reserve(kCoarse);
    int best = 0;
    for (int i = 0; i < kCoarse; ++i) {
        const double p = data_budget * static_cast<double>(i) / (kCoarse - 1);
        const double l = loss_at(p);
        sol.loss_curve.emplace_back(p, l);
        if (l < sol.loss_curve[best].second) best = i;
    }

    const double p_tol = data_budget * 1e-6;
    const double lo = sol.loss_curve[std::max(0, best - 1)].first;
    const double hi = sol.loss_curve[std::min(kCoarse - 1, best + 1)].first;
    ScalarMin refined = golden_minimize(loss_at, lo, hi, p_tol);
    if (sol.loss_curve[best].second < refined.fx) {
        refined.x = sol.loss_curve[best].first;
        refined.fx = sol.loss_curve[best].second;
    }

    // flat-region detection on the coarse curve; ties resolve to the earliest switch
    const double flat_tol = 1e-12 * std::max(1.0, std::abs(refined.fx));
    double flat_min_p = refined.x;
    int flat_count = 0;
    for (const auto& [p, l] : sol.loss_curve) {
        if (l <= refined.fx + flat_tol) {
            ++flat_count;
            flat_min_p = std::min(flat_min_p, p);
        }
    }
    if (flat_count > 1) {
        sol.flat_optimum = true;
        ScalarMin alt = golden_minimize(
            loss_at, std::max(0.0, flat_min_p - data_budget / (kCoarse - 1)),
            std::min(data_budget, flat_min_p + data_budget / (kCoarse - 1)), p_tol);
        if (alt.fx <= refined.fx + flat_tol && alt.x < refined.x) refined = alt;
    }

    sol.P_star = refined.x;
    sol.loss_at_optimum = refined.fx;

    sol.stationarity_applicable = refined.x > p_tol && refined.x < data_budget - p_tol;
    if (sol.stationarity_applicable) {
        const double t_p = refined.x / b1 + (data_budget - refined.x) / b2;
        const double t2 = (data_budget - refined.x) / b2;
        sol.stationarity_residual =
            std::abs(-spec.s * std::pow(t_p, -spec.s - 1.0) +
                     kernel_simplified(t_p, spec.beta) / b1 +
                     kernel_simplified(t2, spec.beta) / b2);
    }
    return sol;
}

double perturbation_objective_delta(const ProblemSpec& spec, const OptimalPlan& plan,
                                    double t_from, double t_to, double delta, double width) {
    const Schedule& sched = plan.schedule;
    const double T = sched.duration();
    const double half = 0.5 * width;
    if (t_from - half < 0.0 || t_from + half > T || t_to - half < 0.0 || t_to + half > T)
        throw DomainError("perturbation window outside [0, T]");
    const double p = 2.0 - 1.0 / spec.beta;
    const auto shifted = [&](double a, double b, double shift) {
        return integrate_adaptive(
            [&](double t) {
                const double bt = sched.eval(t);
                return std::pow(T - t + 1.0, -p) * (1.0 / (bt + shift) - 1.0 / bt);
            },
            a, b, 1e-11, 1e-16);
    };
    const double d_noise = shifted(t_from - half, t_from + half, -delta) +
                           shifted(t_to - half, t_to + half, delta);
    return spec.eta * spec.sigma * spec.sigma * d_noise;
}

std::string format_plan(const OptimalPlan& plan) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "T_star=%.17g\nT1_star=%.17g\nB_max=%.17g\npredicted_loss=%.17g\n"
                  "regime=%s\nmethod=%s\n",
                  plan.T_star, plan.T1_star, plan.B_max, plan.predicted_loss,
                  to_string(plan.regime), to_string(plan.method));
    std::string out = buf;
    if (plan.grid_fallback) out += "grid_fallback=1\n";
    if (plan.boundary_flagged) out += "boundary_flagged=1\n";
    out += format_schedule_text(plan.schedule);
    return out;
}

}  // namespace bss
