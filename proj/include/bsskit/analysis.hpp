#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsskit/model.hpp"
#include "bsskit/trajectory.hpp"

namespace bss {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;  // log-space intercept
    double r_squared = 0.0;
    int n_points = 0;
};

// OLS on (log x, log y); inputs must be strictly positive, n >= 2.
FitResult powerlaw_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Loss gap of constant-B1 vs constant-B2 training at the switch point:
// eta*sigma^2*(1/B1 - 1/B2), unit constants.
double catchup_gap(const ProblemSpec& spec, double b1, double b2);

// Predicted post-switch gap after an interval delta: G* delta^-(1-1/beta).
double catchup_decay_prediction(const ProblemSpec& spec, double g_star, double delta);

// Predicted catch-up time scale: t*^(s/(1-1/beta)).
double catchup_time_prediction(const ProblemSpec& spec, double t_star);

struct CatchupReport {
    double gap_predicted = 0.0;  // G* from catchup_gap
    double gap_measured = 0.0;   // gap at the switch time
    FitResult decay_fit;         // log gap vs log delta on the fit window
    double delta_eps = 0.0;      // smallest delta with switched <= (1+eps)*baseline
    bool delta_eps_reached = false;
    double epsilon = 0.0;
    bool fit_underdetermined = false;  // gap never cleared the noise floor
    std::vector<double> fit_deltas;    // points that entered the decay fit
    std::vector<double> fit_gaps;
};

// Gap analysis of a switched run against its constant-large-batch baseline.
// Trajectories are linearly resampled onto a common post-switch grid; the
// decay fit uses log-spaced deltas in [delta_min, delta_max] and drops
// points whose gap is below 3x the combined Monte-Carlo standard error.
CatchupReport measure_catchup(const Trajectory& switched, const Trajectory& baseline,
                              double t_star, double epsilon, double delta_min, double delta_max,
                              double gap_predicted);

enum class PlanSource { AppendixB2, ClosedForm, NumericKkt };
enum class SweepEvaluator { MonteCarlo, Volterra };

struct SweepPoint {
    double data = 0.0;
    double final_loss = 0.0;
    double loss_stderr = 0.0;  // 0 for deterministic evaluators
};

struct SweepResult {
    std::vector<SweepPoint> points;
    FitResult fit;  // log final_loss vs log data
};

struct SweepOptions {
    SweepEvaluator evaluator = SweepEvaluator::MonteCarlo;
    int repeats = 100;
    std::uint64_t seed = 42;
    double grid_step = 0.0;        // 0 -> T/4096
    double alpha = 1000.0;         // stage-construction scale constant
    double nu = 10.0;              // stage-construction stabilizer
    double b_min = 1.0;            // ClosedForm / NumericKkt plans
    bool tail_average = false;     // average the last 2% of checkpoints
    int n_threads = 0;
    std::int64_t dim_override = 0;  // 0 -> recommended_dim from the predicted loss
};

// Builds one plan per entry of `scales` (data budget D for plan sources
// ClosedForm/NumericKkt, data-scale parameter D0 for AppendixB2), evaluates
// the final loss, and fits log loss vs log total-data.
SweepResult rate_sweep(const ProblemSpec& spec, const std::vector<double>& scales,
                       PlanSource source, const SweepOptions& options);

// Fits log(D - P*) vs log D over optimal two-stage switch points.
// Requires a hard-regime spec.
SweepResult switch_sweep(const ProblemSpec& spec, const std::vector<double>& data_budgets,
                         double b1, double b2);

}  // namespace bss
