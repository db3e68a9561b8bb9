#pragma once

#include <functional>

namespace bss {

// Adaptive Gauss-Kronrod (G7,K15) quadrature. Subdivides until the local
// error estimate satisfies  err <= max(abs_tol, rel_tol*|I|)  scaled by
// interval share. Integrand must be finite on [a,b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-9, double abs_tol = 0.0);

struct ScalarMin {
    double x = 0.0;
    double fx = 0.0;
    bool bracket_ok = true;  // false if the coarse scan saw multiple local minima
};

// Golden-section minimization on [a,b] to x-tolerance `tol` (absolute).
ScalarMin golden_minimize(const std::function<double(double)>& f, double a, double b, double tol);

// Coarse scan on n points followed by golden refinement around the best
// sample. bracket_ok is false when the scan is not unimodal.
ScalarMin scan_then_golden(const std::function<double(double)>& f, double a, double b,
                           int n_scan, double tol);

// Bisection for f(x)=0 on [lo,hi]; requires a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_rel_tol = 1e-13, int max_iter = 200);

// Ordinary least squares y = a*x + b. Returns {slope, intercept, r_squared}.
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
OlsFit ols(const double* xs, const double* ys, int n);

}  // namespace bss
