#pragma once

#include "bsskit/model.hpp"
#include "bsskit/schedule.hpp"
#include "bsskit/trajectory.hpp"

namespace bss {

// Forgetting kernel K(t) = (t+1)^-(2-1/beta).
double kernel_simplified(double t, double beta);

// Truncated spectral sums K(t) = sum_j lambda_j^2 exp(-2 lambda_j t) and
// e(t) = sum_j lambda_j theta*_j^2 exp(-2 lambda_j t).
double kernel_spectral(double t, const Spectrum& spectrum);
double signal_spectral(double t, const Spectrum& spectrum);

// integral_0^t K(t-tau)/b(tau) dtau with the simplified kernel. Constant
// segments use the closed form; power-growth segments use adaptive
// quadrature to 1e-9 relative.
double noise_integral(const Schedule& schedule, double t, double beta);

// Theorem-level predictor: (t+1)^-s + eta*sigma^2 * noise_integral.
double fsl_loss(const ProblemSpec& spec, const Schedule& schedule, double t);

// Expected-loss curve f solving the self-consistent equation
//   f(t) = g(t) + integral_0^t K_spec(t-z) (eta/b(z)) f(z) dz,
//   g(t) = e(t)/2 + (sigma^2/2) eta integral_0^t K_spec(t-z)/b(z) dz,
// by a causal product-trapezoid rule on a uniform grid.
Trajectory volterra_solve(const ProblemSpec& spec, const Schedule& schedule, double grid_step);

enum class MomentVariant { Lower, Upper };

// Per-coordinate second moments m_j(t) = E[(theta_j - theta*_j)^2]:
//   dm_j/dt = -2 lambda_j m_j + (eta/b(t)) lambda_j (c E(t) + sigma^2),
// with c = 2 (Lower) or 4 (Upper) and E(t) = 1/2 sum_j lambda_j m_j,
// integrated by exponential Euler steps.
Trajectory moment_ode(const ProblemSpec& spec, const Schedule& schedule, MomentVariant variant,
                      double grid_step);

}  // namespace bss
