#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsskit/model.hpp"
#include "bsskit/schedule.hpp"

namespace bss {

enum class PlanMethod { ClosedForm, NumericKkt };

const char* to_string(PlanMethod m);

struct OptimalPlan {
    explicit OptimalPlan(Schedule s) : schedule(std::move(s)) {}

    Schedule schedule;
    double data_budget = 0.0;
    double T_star = 0.0;
    double T1_star = 0.0;   // 0 in the easy regime
    double B_max = 0.0;
    double predicted_loss = 0.0;
    Regime regime = Regime::Easy;
    PlanMethod method = PlanMethod::ClosedForm;
    bool grid_fallback = false;     // numeric path fell back to a dense T grid
    bool boundary_flagged = false;  // boundary spec routed through the hard path
    std::optional<double> B_min;    // recorded when the constraint shaped the plan
};

// Theorem-level constructions with all free amplitudes solved exactly from
// the budget constraint.
//   Easy:  b(t) = B_max (T*-t+1)^(1/(2beta)-1), T* = D^(beta/(1+s*beta)).
//   Hard:  constant B_min up to T1*, then the same growth form, amplitude
//          matched continuously at T1*; the horizon solves the fixed point
//          T2 = T*^(1-(1-1/beta-s)/(2-1/beta)) with the budget exact.
OptimalPlan closed_form_plan(const ProblemSpec& spec, double data_budget, double b_min);

// Stationarity-shaped schedule b(t) = clip(C*sqrt(K(T-t)), B_min, B_max_cap):
// C is found by bisection so the budget matches D to 1e-8 relative, then T by
// golden-section minimization of (T+1)^-s + eta*sigma^2*noise_integral over
// [D/(B_max_cap or D), D/B_min]. A non-unimodal coarse scan falls back to a
// dense 256-point grid plus local refinement and flags the plan.
OptimalPlan numeric_kkt_plan(const ProblemSpec& spec, double data_budget, double b_min,
                             std::optional<double> b_max_cap = std::nullopt);

// Final loss of the two-stage schedule (B1 for the first P samples, then B2)
// at its horizon T_P = P/B1 + (D-P)/B2. B1 == B2 degenerates to a constant
// schedule whose loss does not depend on P.
double two_stage_loss(const ProblemSpec& spec, double data_budget, double b1, double b2, double p);

struct SwitchSolution {
    double P_star = 0.0;
    double loss_at_optimum = 0.0;
    std::vector<std::pair<double, double>> loss_curve;  // coarse (P, loss) samples
    double stationarity_residual = 0.0;
    bool stationarity_applicable = false;  // false when P* sits on a boundary
    bool flat_optimum = false;             // ties broken toward the smallest P
};

// Minimizes two_stage_loss over P with a 128-point coarse grid followed by
// golden-section refinement to absolute tolerance D*1e-6.
SwitchSolution optimal_switch(const ProblemSpec& spec, double data_budget, double b1, double b2);

// Objective change from moving `delta` worth of batch from a window centred
// at t_from to one centred at t_to (both of width `width`); budget preserved.
// Used by the first-order optimality checks.
double perturbation_objective_delta(const ProblemSpec& spec, const OptimalPlan& plan,
                                    double t_from, double t_to, double delta, double width);

// Header block (T_star, T1_star, B_max, predicted_loss, regime, method)
// followed by the schedule text.
std::string format_plan(const OptimalPlan& plan);

}  // namespace bss
