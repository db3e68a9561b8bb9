#include "bsskit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsskit/errors.hpp"

namespace bss {

namespace {

// Kronrod 15-point nodes/weights on [-1,1] (symmetric half stored) and the
// embedded Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
    double integral;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double fsum = f(c - x) + f(c + x);
        res_k += kWgk[i] * fsum;
        if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
    }
    res_k *= h;
    res_g *= h;
    return {res_k, std::abs(res_k - res_g)};
}

void gk_adaptive(const std::function<double(double)>& f, double a, double b,
                 double tol_per_len, int depth, double& acc) {
    const GkResult r = gk15(f, a, b);
    if (depth >= 50 || r.error <= tol_per_len * (b - a)) {
        acc += r.integral;
        return;
    }
    const double m = 0.5 * (a + b);
    gk_adaptive(f, a, m, tol_per_len, depth + 1, acc);
    gk_adaptive(f, m, b, tol_per_len, depth + 1, acc);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate_adaptive(f, b, a, rel_tol, abs_tol);
    // first pass to scale the relative tolerance
    const GkResult coarse = gk15(f, a, b);
    const double scale = std::max(std::abs(coarse.integral), 1e-300);
    const double tol = std::max(abs_tol, rel_tol * scale);
    double acc = 0.0;
    gk_adaptive(f, a, b, tol / (b - a), 0, acc);
    return acc;
}

ScalarMin golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm), true};
}

ScalarMin scan_then_golden(const std::function<double(double)>& f, double a, double b,
                           int n_scan, double tol) {
    std::vector<double> xs(n_scan), fs(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        xs[i] = a + (b - a) * static_cast<double>(i) / (n_scan - 1);
        fs[i] = f(xs[i]);
    }
    int best = 0;
    for (int i = 1; i < n_scan; ++i)
        if (fs[i] < fs[best]) best = i;

    // unimodality check on the scan: count strict local minima
    int n_local_min = 0;
    for (int i = 1; i + 1 < n_scan; ++i)
        if (fs[i] < fs[i - 1] && fs[i] < fs[i + 1]) ++n_local_min;
    if (fs[0] < fs[1]) ++n_local_min;
    if (fs[n_scan - 1] < fs[n_scan - 2]) ++n_local_min;

    const double lo = xs[std::max(0, best - 1)];
    const double hi = xs[std::min(n_scan - 1, best + 1)];
    ScalarMin m = golden_minimize(f, lo, hi, tol);
    m.bracket_ok = n_local_min <= 1;
    // golden refinement never returns worse than the scanned best
    if (fs[best] < m.fx) {
        m.x = xs[best];
        m.fx = fs[best];
    }
    return m;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_rel_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw DomainError("bisect_root: no sign change on the bracket");
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= x_rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

OlsFit ols(const double* xs, const double* ys, int n) {
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    OlsFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0) {
        double ss_res = 0;
        for (int i = 0; i < n; ++i) {
            const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
        fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    } else {
        fit.r_squared = 1.0;  // constant y fitted exactly by slope 0
    }
    return fit;
}

}  // namespace bss
