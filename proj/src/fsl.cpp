#include "bsskit/fsl.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsskit/errors.hpp"
#include "bsskit/numerics.hpp"

namespace bss {

namespace {

void check_time(double t, const char* who) {
    if (!(t >= 0.0)) throw DomainError(std::string(who) + ": t must be >= 0");
}

const char* kind_name(TrajectoryKind k) { return to_string(k); }

}  // namespace

const char* to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::SimplifiedFsl: return "SimplifiedFSL";
        case TrajectoryKind::SpectralVolterra: return "SpectralVolterra";
        case TrajectoryKind::MomentOdeLower: return "MomentODE-Lower";
        case TrajectoryKind::MomentOdeUpper: return "MomentODE-Upper";
        default: return "MonteCarlo";
    }
}

void Trajectory::validate() const {
    if (times.size() != losses.size())
        throw DomainError("Trajectory: times/losses size mismatch");
    if (!stderrs.empty() && stderrs.size() != times.size())
        throw DomainError("Trajectory: stderr size mismatch");
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > prev)) throw DomainError("Trajectory: times must be strictly increasing and > 0");
        prev = times[i];
        if (!std::isfinite(losses[i]) || losses[i] < 0.0)
            throw DomainError("Trajectory: losses must be finite and >= 0");
        if (!stderrs.empty() && (!std::isfinite(stderrs[i]) || stderrs[i] < 0.0))
            throw DomainError("Trajectory: stderr must be finite and >= 0");
    }
}

double Trajectory::final_loss() const {
    if (losses.empty()) throw DomainError("Trajectory: empty");
    return losses.back();
}

double Trajectory::interpolate(double t) const {
    if (times.empty()) throw DomainError("Trajectory: empty");
    if (t <= times.front()) return losses.front();
    if (t >= times.back()) return losses.back();
    auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return losses[lo] + w * (losses[hi] - losses[lo]);
}

double kernel_simplified(double t, double beta) {
    check_time(t, "kernel_simplified");
    return std::pow(t + 1.0, -(2.0 - 1.0 / beta));
}

double kernel_spectral(double t, const Spectrum& spectrum) {
    check_time(t, "kernel_spectral");
    double acc = 0.0;
    for (double lam : spectrum.lambdas) acc += lam * lam * std::exp(-2.0 * lam * t);
    return acc;
}

double signal_spectral(double t, const Spectrum& spectrum) {
    check_time(t, "signal_spectral");
    double acc = 0.0;
    for (std::size_t j = 0; j < spectrum.lambdas.size(); ++j) {
        const double th = spectrum.theta_star[j];
        acc += spectrum.lambdas[j] * th * th * std::exp(-2.0 * spectrum.lambdas[j] * t);
    }
    return acc;
}

double noise_integral(const Schedule& schedule, double t, double beta) {
    if (t < 0.0 || t > schedule.duration() * (1.0 + 1e-12))
        throw DomainError("noise_integral: t outside [0, T]");
    t = std::min(t, schedule.duration());
    const double p = 2.0 - 1.0 / beta;  // kernel decay exponent, in (1,2)
    double acc = 0.0;
    for (const auto& seg : schedule.segments()) {
        const double a = seg.t_start;
        const double b = std::min(seg.t_end, t);
        if (b <= a) break;
        if (const auto* c = std::get_if<ConstantForm>(&seg.form)) {
            // int_a^b (t - tau + 1)^-p dtau = [u^(1-p)]_{u=t-b+1}^{t-a+1} / (p-1)
            const double ua = t - a + 1.0;
            const double ub = t - b + 1.0;
            acc += (std::pow(ub, 1.0 - p) - std::pow(ua, 1.0 - p)) / ((p - 1.0) * c->batch);
        } else {
            const auto integrand = [&](double tau) {
                return std::pow(t - tau + 1.0, -p) / seg.eval(tau);
            };
            acc += integrate_adaptive(integrand, a, b, 1e-9);
        }
    }
    return acc;
}

double fsl_loss(const ProblemSpec& spec, const Schedule& schedule, double t) {
    if (!(t > 0.0)) throw DomainError("fsl_loss: t must be > 0");
    const double signal = std::pow(t + 1.0, -spec.s);
    return signal + spec.eta * spec.sigma * spec.sigma * noise_integral(schedule, t, spec.beta);
}

namespace {

struct Grid {
    std::vector<double> times;    // t_i = i*h, i = 0..m
    std::vector<double> inv_b;    // 1/b(t_i)
    double h;
};

Grid make_grid(const Schedule& schedule, double grid_step) {
    if (!(grid_step > 0.0)) throw DomainError("grid_step must be > 0");
    const double horizon = schedule.duration();
    const auto m = static_cast<std::size_t>(std::ceil(horizon / grid_step - 1e-9));
    if (m < 2) throw DomainError("grid_step too coarse for the schedule horizon");
    Grid g;
    g.h = horizon / static_cast<double>(m);
    g.times.resize(m + 1);
    g.inv_b.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        g.times[i] = g.h * static_cast<double>(i);
        g.inv_b[i] = 1.0 / schedule.eval(std::min(g.times[i], horizon));
    }
    return g;
}

void check_divergence(double value, double reference, std::size_t step, TrajectoryKind kind) {
    if (!std::isfinite(value) || value > 1e6 * std::max(reference, 1e-300))
        throw DivergenceError(std::string(kind_name(kind)) + ": solution blew up",
                              static_cast<long long>(step));
}

Trajectory collect(const std::vector<double>& times, const std::vector<double>& losses,
                   TrajectoryKind kind, const ProblemSpec& spec, const Schedule& schedule) {
    Trajectory tr;
    // drop t = 0; trajectory grids start at the first positive time
    tr.times.assign(times.begin() + 1, times.end());
    tr.losses.assign(losses.begin() + 1, losses.end());
    tr.kind = kind;
    tr.meta.spec_hash = spec.content_hash();
    tr.meta.schedule_hash = schedule.content_hash();
    tr.validate();
    return tr;
}

}  // namespace

Trajectory volterra_solve(const ProblemSpec& spec, const Schedule& schedule, double grid_step) {
    spec.validate();
    const Spectrum sp = make_spectrum(spec);
    const Grid grid = make_grid(schedule, grid_step);
    const std::size_t m = grid.times.size() - 1;
    const double h = grid.h;
    const double eta = spec.eta;
    const double half_sigma2 = 0.5 * spec.sigma * spec.sigma;

    // kernel and forcing signal on the grid; the convolution kernel only
    // needs lags (i-j)*h
    std::vector<double> kern(m + 1), half_signal(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        kern[i] = kernel_spectral(grid.times[i], sp);
        half_signal[i] = 0.5 * signal_spectral(grid.times[i], sp);
    }

    // g_i = e(t_i)/2 + (sigma^2/2) * eta * int_0^{t_i} K(t_i - z)/b(z) dz
    // with the trapezoid rule reused for the forcing integral.
    std::vector<double> f(m + 1);
    f[0] = half_signal[0];
    const double f0 = f[0];
    for (std::size_t i = 1; i <= m; ++i) {
        double conv_g = 0.5 * (kern[i] * grid.inv_b[0] + kern[0] * grid.inv_b[i]);
        for (std::size_t j = 1; j < i; ++j) conv_g += kern[i - j] * grid.inv_b[j];
        const double g_i = half_signal[i] + half_sigma2 * eta * h * conv_g;

        double conv_f = 0.5 * kern[i] * grid.inv_b[0] * f[0];
        for (std::size_t j = 1; j < i; ++j) conv_f += kern[i - j] * grid.inv_b[j] * f[j];
        const double implicit = 0.5 * h * eta * kern[0] * grid.inv_b[i];
        f[i] = (g_i + eta * h * conv_f) / (1.0 - implicit);
        check_divergence(f[i], f0, i, TrajectoryKind::SpectralVolterra);
        if (f[i] < 0.0) f[i] = 0.0;  // trapezoid undershoot near fast decay
    }
    return collect(grid.times, f, TrajectoryKind::SpectralVolterra, spec, schedule);
}

Trajectory moment_ode(const ProblemSpec& spec, const Schedule& schedule, MomentVariant variant,
                      double grid_step) {
    spec.validate();
    const Spectrum sp = make_spectrum(spec);
    const Grid grid = make_grid(schedule, grid_step);
    const std::size_t m = grid.times.size() - 1;
    const double h = grid.h;
    const double c = variant == MomentVariant::Lower ? 2.0 : 4.0;
    const double sigma2 = spec.sigma * spec.sigma;
    const std::size_t n = sp.lambdas.size();

    std::vector<double> moments(n), decay(n), gain(n);
    for (std::size_t j = 0; j < n; ++j) {
        moments[j] = sp.theta_star[j] * sp.theta_star[j];
        const double lam = sp.lambdas[j];
        decay[j] = std::exp(-2.0 * lam * h);
        gain[j] = (1.0 - decay[j]) / (2.0 * lam);  // integrated response to unit forcing
    }

    const auto risk = [&]() {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += sp.lambdas[j] * moments[j];
        return 0.5 * acc;
    };

    std::vector<double> losses(m + 1);
    losses[0] = risk();
    const double ref = losses[0];
    for (std::size_t i = 1; i <= m; ++i) {
        // forcing frozen at the left endpoint over [t_{i-1}, t_i]
        const double drive = spec.eta * grid.inv_b[i - 1] * (c * losses[i - 1] + sigma2);
        for (std::size_t j = 0; j < n; ++j)
            moments[j] = moments[j] * decay[j] + sp.lambdas[j] * drive * gain[j];
        losses[i] = risk();
        check_divergence(losses[i], ref, i,
                         variant == MomentVariant::Lower ? TrajectoryKind::MomentOdeLower
                                                         : TrajectoryKind::MomentOdeUpper);
    }
    return collect(grid.times, losses,
                   variant == MomentVariant::Lower ? TrajectoryKind::MomentOdeLower
                                                   : TrajectoryKind::MomentOdeUpper,
                   spec, schedule);
}

}  // namespace bss
