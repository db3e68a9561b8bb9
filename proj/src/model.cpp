#include "bsskit/model.hpp"

#include <cmath>
#include <cstdio>

#include "bsskit/errors.hpp"
#include "bsskit/rng.hpp"

namespace bss {

void ProblemSpec::validate() const {
    if (!(s > 0.0)) throw DomainError("ProblemSpec: s must be > 0");
    if (!(beta > 1.0)) throw DomainError("ProblemSpec: beta must be > 1 (trace-class spectrum)");
    if (!(sigma >= 0.0)) throw DomainError("ProblemSpec: sigma must be >= 0");
    if (!(eta > 0.0)) throw DomainError("ProblemSpec: eta must be > 0");
    if (!(eta < 1.0)) throw DomainError("ProblemSpec: eta*lambda_1 = eta must be < 1");
    if (dim < 1) throw DomainError("ProblemSpec: dim must be >= 1");
}

std::uint64_t ProblemSpec::content_hash() const {
    char buf[160];
    const int n = std::snprintf(buf, sizeof buf, "s=%.17g;beta=%.17g;sigma=%.17g;eta=%.17g;dim=%lld",
                                s, beta, sigma, eta, static_cast<long long>(dim));
    return fnv1a(buf, static_cast<std::size_t>(n));
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Easy: return "Easy";
        case Regime::Hard: return "Hard";
        default: return "Boundary";
    }
}

Spectrum make_spectrum(const ProblemSpec& spec) {
    spec.validate();
    Spectrum sp;
    sp.lambdas.resize(static_cast<std::size_t>(spec.dim));
    sp.theta_star.resize(static_cast<std::size_t>(spec.dim));
    const double theta_exp = -0.5 * (1.0 + (spec.s - 1.0) * spec.beta);
    for (std::int64_t j = 1; j <= spec.dim; ++j) {
        const double dj = static_cast<double>(j);
        sp.lambdas[j - 1] = std::pow(dj, -spec.beta);
        sp.theta_star[j - 1] = std::pow(dj, theta_exp);
    }
    const double sb = spec.s * spec.beta;
    sp.tail_bound = std::pow(static_cast<double>(spec.dim), -sb) / sb;
    return sp;
}

double excess_risk(const Spectrum& spectrum, std::span<const double> theta) {
    if (theta.size() != spectrum.lambdas.size())
        throw DomainError("excess_risk: theta length does not match spectrum dimension");
    double acc = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double d = theta[j] - spectrum.theta_star[j];
        acc += spectrum.lambdas[j] * d * d;
    }
    return 0.5 * acc;
}

double excess_risk_displacement(const Spectrum& spectrum, std::span<const double> u) {
    if (u.size() != spectrum.lambdas.size())
        throw DomainError("excess_risk: displacement length does not match spectrum dimension");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) acc += spectrum.lambdas[j] * u[j] * u[j];
    return 0.5 * acc;
}

Regime regime(const ProblemSpec& spec) {
    const double margin = spec.s - (1.0 - 1.0 / spec.beta);
    if (std::abs(margin) <= 1e-12) return Regime::Boundary;
    return margin > 0.0 ? Regime::Easy : Regime::Hard;
}

std::int64_t recommended_dim(const ProblemSpec& spec, double predicted_loss) {
    if (!(predicted_loss > 0.0)) throw DomainError("recommended_dim: predicted_loss must be > 0");
    const double sb = spec.s * spec.beta;
    // N^-sb / sb <= 0.01 * L  =>  N >= (0.01 * L * sb)^(-1/sb)
    const double n_raw = std::pow(0.01 * predicted_loss * sb, -1.0 / sb);
    const double n = std::ceil(n_raw);
    std::int64_t out = 1000;
    if (n > 1000.0) out = static_cast<std::int64_t>(n);
    return out;
}

}  // namespace bss
