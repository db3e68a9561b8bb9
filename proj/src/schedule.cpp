#include "bsskit/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bsskit/errors.hpp"
#include "bsskit/rng.hpp"

namespace bss {

namespace {

// integral of (t_ref - t + 1)^p over [a,b]; p != -1 on all call sites
double power_segment_integral(double t_ref, double p, double a, double b) {
    const double ua = t_ref - a + 1.0;
    const double ub = t_ref - b + 1.0;
    if (std::abs(p + 1.0) < 1e-14) return std::log(ua / ub);
    return (std::pow(ua, p + 1.0) - std::pow(ub, p + 1.0)) / (p + 1.0);
}

}  // namespace

double Segment::eval(double t) const {
    if (const auto* c = std::get_if<ConstantForm>(&form)) return c->batch;
    const auto& g = std::get<PowerGrowthForm>(form);
    return g.amplitude * std::pow(g.t_ref - t + 1.0, g.exponent);
}

double Segment::integral(double a, double b) const {
    if (const auto* c = std::get_if<ConstantForm>(&form)) return c->batch * (b - a);
    const auto& g = std::get<PowerGrowthForm>(form);
    return g.amplitude * power_segment_integral(g.t_ref, g.exponent, a, b);
}

double Segment::inverse_integral(double a, double b) const {
    if (const auto* c = std::get_if<ConstantForm>(&form)) return (b - a) / c->batch;
    const auto& g = std::get<PowerGrowthForm>(form);
    return power_segment_integral(g.t_ref, -g.exponent, a, b) / g.amplitude;
}

void Segment::validate() const {
    if (!(t_start < t_end)) throw DomainError("Segment: t_start must be < t_end");
    if (const auto* c = std::get_if<ConstantForm>(&form)) {
        if (!(c->batch >= 1.0)) throw DomainError("Segment: constant batch must be >= 1");
        return;
    }
    const auto& g = std::get<PowerGrowthForm>(form);
    if (!(g.amplitude > 0.0)) throw DomainError("Segment: power-growth amplitude must be > 0");
    if (!(g.exponent < 0.0)) throw DomainError("Segment: power-growth exponent must be < 0");
    if (!(g.t_ref >= t_end)) throw DomainError("Segment: power-growth t_ref must be >= t_end");
    // monotone increasing, so endpoint checks cover the whole segment
    if (!(eval(t_start) >= 1.0 - 1e-12) || !(eval(t_end) >= 1.0 - 1e-12))
        throw DomainError("Segment: b(t) must stay >= 1 on the segment");
}

Schedule::Schedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw DomainError("Schedule: needs at least one segment");
    for (const auto& s : segments_) s.validate();
    if (std::abs(segments_.front().t_start) > 0.0)
        throw DomainError("Schedule: first segment must start at t = 0");
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].t_start != segments_[i - 1].t_end)
            throw DomainError("Schedule: segments must be contiguous");
    }
    horizon_ = segments_.back().t_end;
    budget_ = 0.0;
    for (const auto& s : segments_) budget_ += s.integral(s.t_start, s.t_end);
}

double Schedule::eval(double t) const {
    if (t < 0.0 || t > horizon_) throw DomainError("Schedule::eval: t outside [0, T]");
    // right-continuous: t belongs to the segment with t_start <= t < t_end
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t_end; });
    if (it == segments_.end()) --it;  // t == T
    return it->eval(t);
}

std::uint64_t Schedule::content_hash() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& s : segments_) {
        double vals[5] = {s.t_start, s.t_end, 0, 0, 0};
        if (const auto* c = std::get_if<ConstantForm>(&s.form)) {
            vals[2] = c->batch;
        } else {
            const auto& g = std::get<PowerGrowthForm>(s.form);
            vals[2] = g.amplitude;
            vals[3] = g.t_ref;
            vals[4] = g.exponent;
        }
        h = fnv1a(vals, sizeof vals, h);
    }
    return h;
}

Schedule Schedule::constant(double batch, double data_budget) {
    if (!(batch >= 1.0)) throw DomainError("constant schedule: batch must be >= 1");
    if (!(data_budget > 0.0)) throw DomainError("constant schedule: data budget must be > 0");
    Segment s;
    s.t_start = 0.0;
    s.t_end = data_budget / batch;
    s.form = ConstantForm{batch};
    return Schedule({s});
}

Schedule Schedule::two_stage(double b1, double b2, double data_budget, double pre_switch_data) {
    if (!(b1 >= 1.0) || !(b2 > b1)) throw DomainError("two_stage: need 1 <= B1 < B2");
    if (!(data_budget > 0.0)) throw DomainError("two_stage: data budget must be > 0");
    if (pre_switch_data < 0.0 || pre_switch_data > data_budget)
        throw DomainError("two_stage: pre-switch data P must be in [0, D]");
    if (pre_switch_data == 0.0) return constant(b2, data_budget);
    if (pre_switch_data == data_budget) return constant(b1, data_budget);
    const double t_switch = pre_switch_data / b1;
    const double horizon = t_switch + (data_budget - pre_switch_data) / b2;
    Segment first{0.0, t_switch, ConstantForm{b1}};
    Segment second{t_switch, horizon, ConstantForm{b2}};
    return Schedule({first, second});
}

std::int64_t DiscreteSchedule::total_samples() const {
    std::int64_t acc = 0;
    for (auto b : batch_sizes) acc += b;
    return acc;
}

std::uint64_t DiscreteSchedule::content_hash() const {
    std::uint64_t h = fnv1a(&eta, sizeof eta);
    if (!batch_sizes.empty())
        h = fnv1a(batch_sizes.data(), batch_sizes.size() * sizeof(std::int64_t), h);
    return h;
}

DiscreteSchedule appendix_b2_easy(double d0, double alpha, double nu, const ProblemSpec& spec) {
    spec.validate();
    if (!(d0 > 0.0) || !(alpha > 0.0) || !(nu > 0.0))
        throw DomainError("appendix_b2_easy: D0, alpha, nu must be > 0");
    const double sb = spec.s * spec.beta;
    const double scale = alpha * d0;
    const auto steps = static_cast<std::int64_t>(std::floor(std::pow(scale, spec.beta / (1.0 + sb))));
    if (steps < 1) throw DomainError("appendix_b2_easy: K = 0, D0 too small");
    const double peak_coeff = std::sqrt(0.5 + sb) * std::pow(scale, (0.5 + sb) / (1.0 + sb));
    const double growth_exp = 0.5 / spec.beta - 1.0;

    DiscreteSchedule ds;
    ds.eta = spec.eta;
    ds.batch_sizes.resize(static_cast<std::size_t>(steps));
    for (std::int64_t k = 0; k < steps; ++k) {
        const double stage = static_cast<double>(steps - k) + nu;
        const double b = std::floor(peak_coeff * std::pow(stage, growth_exp));
        ds.batch_sizes[static_cast<std::size_t>(k)] = std::max<std::int64_t>(1, static_cast<std::int64_t>(b));
    }
    return ds;
}

DiscreteSchedule appendix_b2_hard(double d0, double alpha, double nu, const ProblemSpec& spec) {
    spec.validate();
    if (!(d0 > 0.0) || !(alpha > 0.0) || !(nu > 0.0))
        throw DomainError("appendix_b2_hard: D0, alpha, nu must be > 0");
    const auto steps = static_cast<std::int64_t>(std::floor(alpha * d0));
    if (steps < 1) throw DomainError("appendix_b2_hard: K = 0, D0 too small");
    const double growth_time = std::pow(d0, (spec.s + 1.0) / (2.0 - 1.0 / spec.beta));
    const auto stable_steps = static_cast<std::int64_t>(std::floor(alpha * (d0 - growth_time)));
    if (stable_steps < 0)
        throw DomainError("appendix_b2_hard: K1 < 0, D0 too small for this regime");
    const double growth_exp = 0.5 / spec.beta - 1.0;
    const double denom = static_cast<double>(steps - stable_steps) + nu;

    DiscreteSchedule ds;
    ds.eta = spec.eta;
    ds.batch_sizes.resize(static_cast<std::size_t>(steps));
    for (std::int64_t k = 0; k < steps; ++k) {
        std::int64_t b = 1;
        if (k >= stable_steps) {
            const double ratio = (static_cast<double>(steps - k) + nu) / denom;
            b = static_cast<std::int64_t>(std::floor(std::pow(ratio, growth_exp)));
        }
        ds.batch_sizes[static_cast<std::size_t>(k)] = std::max<std::int64_t>(1, b);
    }
    return ds;
}

DiscreteSchedule discretize(const Schedule& schedule, double eta) {
    if (!(eta > 0.0)) throw DomainError("discretize: eta must be > 0");
    const double horizon = schedule.duration();
    const auto steps = static_cast<std::int64_t>(std::ceil(horizon / eta - 1e-12));
    DiscreteSchedule ds;
    ds.eta = eta;
    ds.batch_sizes.resize(static_cast<std::size_t>(steps));
    for (std::int64_t k = 1; k <= steps; ++k) {
        const double t = std::min(static_cast<double>(k) * eta, horizon);
        const double b = schedule.eval(t);
        ds.batch_sizes[static_cast<std::size_t>(k - 1)] =
            std::max<std::int64_t>(1, std::llround(b));
    }
    return ds;
}

Schedule to_piecewise_constant(const DiscreteSchedule& ds) {
    if (ds.batch_sizes.empty()) throw DomainError("to_piecewise_constant: empty schedule");
    if (!(ds.eta > 0.0)) throw DomainError("to_piecewise_constant: eta must be > 0");
    std::vector<Segment> segs;
    segs.reserve(ds.batch_sizes.size());
    std::size_t i = 0;
    while (i < ds.batch_sizes.size()) {
        std::size_t j = i;
        while (j + 1 < ds.batch_sizes.size() && ds.batch_sizes[j + 1] == ds.batch_sizes[i]) ++j;
        Segment s;
        s.t_start = ds.eta * static_cast<double>(i);
        s.t_end = ds.eta * static_cast<double>(j + 1);
        s.form = ConstantForm{static_cast<double>(ds.batch_sizes[i])};
        segs.push_back(s);
        i = j + 1;
    }
    return Schedule(std::move(segs));
}

std::string format_schedule_text(const Schedule& schedule) {
    std::string out;
    char line[256];
    for (const auto& s : schedule.segments()) {
        if (const auto* c = std::get_if<ConstantForm>(&s.form)) {
            std::snprintf(line, sizeof line, "constant %.17g %.17g %.17g\n", s.t_start, s.t_end,
                          c->batch);
        } else {
            const auto& g = std::get<PowerGrowthForm>(s.form);
            std::snprintf(line, sizeof line, "powergrowth %.17g %.17g %.17g %.17g %.17g\n",
                          s.t_start, s.t_end, g.amplitude, g.t_ref, g.exponent);
        }
        out += line;
    }
    return out;
}

Schedule parse_schedule_text(const std::string& text) {
    std::vector<Segment> segs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        Segment s;
        if (kind == "constant") {
            double b = 0;
            if (!(ls >> s.t_start >> s.t_end >> b))
                throw ConfigError("schedule text line " + std::to_string(lineno) +
                                  ": expected `constant <t_start> <t_end> <B>`");
            s.form = ConstantForm{b};
        } else if (kind == "powergrowth") {
            PowerGrowthForm g;
            if (!(ls >> s.t_start >> s.t_end >> g.amplitude >> g.t_ref >> g.exponent))
                throw ConfigError("schedule text line " + std::to_string(lineno) +
                                  ": expected `powergrowth <t_start> <t_end> <A> <t_ref> <q>`");
            s.form = g;
        } else {
            throw ConfigError("schedule text line " + std::to_string(lineno) +
                              ": unknown segment kind `" + kind + "`");
        }
        segs.push_back(s);
    }
    if (segs.empty()) throw ConfigError("schedule text: no segments");
    return Schedule(std::move(segs));
}

}  // namespace bss
