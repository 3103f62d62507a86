#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "quadrature.hpp"

namespace expact::oracles {

// Independent references for the special functions: each one integrates the
// defining integral with the adaptive engine instead of reusing the series /
// continued-fraction implementations. Diagnostic and test use only — these
// are orders of magnitude slower than the specfun routines.

/// E_a(z) by its definition: integral over k in [1, inf) of e^(-k z) k^(-a).
inline double en_defining_integral(double a, double z, const AccuracyPolicy& policy = {}) {
    return quad_adaptive([a, z](double k) { return std::exp(-k * z) * std::pow(k, -a); }, 1.0,
                         std::numeric_limits<double>::infinity(), policy);
}

/// Principal-value Ei(x), x > 0, with the singularity at t = 0 removed by the
/// symmetric split: the two legs of p.v. integral e^t/t over (-inf, x]
/// combine into Ei(x) = integral_0^x 2 sinh(t)/t dt - integral_x^inf e^(-t)/t dt,
/// both integrands regular on their domains.
inline double ei_defining_integral(double x, const AccuracyPolicy& policy = {}) {
    const double head =
        quad_adaptive([](double t) { return 2.0 * std::sinh(t) / t; }, 0.0, x, policy);
    const double tail =
        quad_adaptive([](double t) { return std::exp(-t) / t; }, x,
                      std::numeric_limits<double>::infinity(), policy);
    return head - tail;
}

/// Gamma(s, x) by its definition: integral over t in [x, inf) of t^(s-1) e^(-t),
/// for x > 0 (any real s).
inline double gamma_upper_defining_integral(double s, double x,
                                            const AccuracyPolicy& policy = {}) {
    return quad_adaptive([s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, x,
                         std::numeric_limits<double>::infinity(), policy);
}

/// erf(x) by its definition: 2/sqrt(pi) integral_0^x e^(-t^2) dt.
inline double erf_defining_integral(double x, const AccuracyPolicy& policy = {}) {
    const double ax = std::abs(x);
    const double v = 2.0 * std::numbers::inv_sqrtpi_v<double> *
                     quad_adaptive([](double t) { return std::exp(-t * t); }, 0.0, ax, policy);
    return x < 0.0 ? -v : v;
}

/// Central finite difference (f(x+h) - f(x-h)) / 2h. The default step
/// balances truncation against cancellation for double precision.
template <class F>
double central_difference(F&& f, double x, double h = 0.0) {
    if (h == 0.0) h = 6.0e-6 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// One Richardson step for a second-order sequence: given A(h) and A(h/2),
/// returns the h^2-extrapolated limit (4 A(h/2) - A(h)) / 3.
inline double richardson_second_order(double coarse, double fine) {
    return fine + (fine - coarse) / 3.0;
}

/// Relative deviation |a - b| / max(|b|, floor) with b as the reference.
inline double relative_error(double a, double b, double floor = 1e-300) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace expact::oracles
