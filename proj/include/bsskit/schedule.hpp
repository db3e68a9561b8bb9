#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bsskit/model.hpp"

namespace bss {

// b(t) = batch, t in [t_start, t_end)
struct ConstantForm {
    double batch = 1.0;
};

// b(t) = amplitude * (t_ref - t + 1)^exponent with exponent < 0 and
// t_ref >= t_end, so b is finite and increasing on the segment.
struct PowerGrowthForm {
    double amplitude = 1.0;
    double t_ref = 0.0;
    double exponent = -0.5;
};

struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    std::variant<ConstantForm, PowerGrowthForm> form;

    double eval(double t) const;
    // closed-form integral of b over [a,b] (subinterval of the segment)
    double integral(double a, double b) const;
    // closed-form integral of 1/b over [a,b]
    double inverse_integral(double a, double b) const;
    void validate() const;
};

// Piecewise batch-size function over [0, T] with cached data budget
// D = integral of b. Immutable after construction.
class Schedule {
public:
    explicit Schedule(std::vector<Segment> segments);

    double eval(double t) const;      // throws DomainError outside [0, T]
    double budget() const { return budget_; }
    double duration() const { return horizon_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::uint64_t content_hash() const;

    static Schedule constant(double batch, double data_budget);
    // Constant B1 on [0, P/B1], constant B2 up to T = P/B1 + (D-P)/B2.
    // P = 0 or P = D degenerates to a single segment.
    static Schedule two_stage(double b1, double b2, double data_budget, double pre_switch_data);

private:
    std::vector<Segment> segments_;
    double horizon_ = 0.0;
    double budget_ = 0.0;
};

// Integer per-step batch sizes; step k runs over continuous time
// ((k-1)*eta, k*eta].
struct DiscreteSchedule {
    std::vector<std::int64_t> batch_sizes;
    double eta = 0.0;

    std::int64_t total_samples() const;
    double time_horizon() const { return eta * static_cast<double>(batch_sizes.size()); }
    std::uint64_t content_hash() const;
};

// Discrete stage-growth schedule:
//   B_k = max(1, floor(sqrt(1/2+s*beta) * (alpha*D0)^((1/2+s*beta)/(1+s*beta))
//                      * (K - k + nu)^(1/(2beta)-1))),  k = 0..K-1,
//   K = floor((alpha*D0)^(beta/(1+s*beta))).
// With alpha=1000, nu=10, s=1, beta=2 the totals over D0 in {2,4,8,16,32}
// are 6346, 13973, 30331, 64962, 137693.
DiscreteSchedule appendix_b2_easy(double d0, double alpha, double nu, const ProblemSpec& spec);

// Discrete stable-then-growth schedule:
//   B_k = 1 for k < K1, else floor(((K-k+nu)/(K-K1+nu))^(1/(2beta)-1)),
//   K = floor(alpha*D0), K1 = floor(alpha*(D0 - D0^((s+1)/(2-1/beta)))).
DiscreteSchedule appendix_b2_hard(double d0, double alpha, double nu, const ProblemSpec& spec);

// B_k = max(1, round(b(min(k*eta, T)))) for k = 1..ceil(T/eta).
DiscreteSchedule discretize(const Schedule& schedule, double eta);

// View a discrete schedule as a piecewise-constant continuous one
// (step k occupies [(k-1)*eta, k*eta)).
Schedule to_piecewise_constant(const DiscreteSchedule& ds);

// One segment per line:
//   constant <t_start> <t_end> <B>
//   powergrowth <t_start> <t_end> <A> <t_ref> <q>
std::string format_schedule_text(const Schedule& schedule);
Schedule parse_schedule_text(const std::string& text);

}  // namespace bss
