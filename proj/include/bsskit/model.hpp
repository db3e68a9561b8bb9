#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bss {

// Power-law linear regression task:
//   eigenvalues      lambda_j = j^-beta
//   target coeffs    theta*_j = j^-(1+(s-1)beta)/2   (taken positive)
//   labels           y = <phi, theta*> + Normal(0, sigma^2)
// One-pass SGD runs at constant learning rate eta; continuous time is t = k*eta.
struct ProblemSpec {
    double s = 1.0;       // source exponent, > 0
    double beta = 2.0;    // capacity exponent, > 1
    double sigma = 1.0;   // label noise std, >= 0
    double eta = 0.05;    // learning rate, 0 < eta < 1 (lambda_1 = 1)
    std::int64_t dim = 1000;  // truncation dimension N, >= 1

    void validate() const;  // throws DomainError
    std::uint64_t content_hash() const;
};

enum class Regime { Easy, Hard, Boundary };

const char* to_string(Regime r);

struct Spectrum {
    std::vector<double> lambdas;     // strictly decreasing, lambda_1 = 1
    std::vector<double> theta_star;  // positive
    double tail_bound = 0.0;         // upper bound on sum_{j>N} lambda_j theta*_j^2
    std::int64_t dim() const { return static_cast<std::int64_t>(lambdas.size()); }
};

Spectrum make_spectrum(const ProblemSpec& spec);

// 1/2 * sum_j lambda_j (theta_j - theta*_j)^2
double excess_risk(const Spectrum& spectrum, std::span<const double> theta);

// Same risk expressed in the displacement u = theta - theta*.
double excess_risk_displacement(const Spectrum& spectrum, std::span<const double> u);

// Easy iff s > 1 - 1/beta, Hard iff s < 1 - 1/beta; equality within 1e-12
// absolute is Boundary.
Regime regime(const ProblemSpec& spec);

// Smallest N with tail bound N^-(s*beta)/(s*beta) <= 0.01 * predicted_loss,
// floored at 1000.
std::int64_t recommended_dim(const ProblemSpec& spec, double predicted_loss);

}  // namespace bss
