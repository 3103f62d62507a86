#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace expact {

inline constexpr double euler_gamma = 0.57721566490153286061;

namespace detail {

inline constexpr int specfun_max_iter = 20000;
inline constexpr double specfun_eps = std::numeric_limits<double>::epsilon();
inline constexpr double specfun_tiny = 1.0e-300;

// Lower incomplete gamma by its power series,
//   gamma(s,x) = x^s e^-x sum_{n>=0} x^n / (s (s+1) ... (s+n)),  s > 0, x < s+1.
inline double lower_gamma_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < specfun_max_iter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * specfun_eps)
            return sum * std::exp(-x + s * std::log(x));
    }
    throw ConvergenceError("lower incomplete gamma series stalled", sum * std::exp(-x + s * std::log(x)));
}

// Upper incomplete gamma by the Legendre continued fraction (modified Lentz),
//   Gamma(s,x) = e^-x x^s / (x+1-s - 1(1-s)/(x+3-s - 2(2-s)/(...))),
// reliable for x >= s+1.
inline double upper_gamma_contfrac(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / specfun_tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= specfun_max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < specfun_tiny) d = specfun_tiny;
        c = b + an / c;
        if (std::abs(c) < specfun_tiny) c = specfun_tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= specfun_eps)
            return h * std::exp(-x + s * std::log(x));
    }
    throw ConvergenceError("upper incomplete gamma continued fraction stalled",
                           h * std::exp(-x + s * std::log(x)));
}

// E_a(z) for z > 1 via the equivalent continued fraction
//   E_a(z) = e^-z / (z + a - 1*a/(z + 2 + ...)),
// evaluated with modified Lentz. Valid for real a >= 0.
inline double en_contfrac(double a, double z) {
    double b = z + a;
    double c = 1.0 / specfun_tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= specfun_max_iter; ++i) {
        const double an = -i * (a - 1.0 + i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < specfun_tiny) d = specfun_tiny;
        c = b + an / c;
        if (std::abs(c) < specfun_tiny) c = specfun_tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= specfun_eps) return h * std::exp(-z);
    }
    throw ConvergenceError("E_a continued fraction stalled", h * std::exp(-z));
}

// E_n(z) for integer n >= 1 and z <= 1: power series with the digamma term,
//   E_n(z) = (-z)^(n-1)/(n-1)! (psi(n) - ln z) - sum_{k != n-1} (-z)^k / (k! (k-n+1)).
inline double en_series_int(int n, double z) {
    const int nm1 = n - 1;
    double ans = (nm1 != 0) ? 1.0 / nm1 : -std::log(z) - euler_gamma;
    double fact = 1.0;
    for (int i = 1; i <= specfun_max_iter; ++i) {
        fact *= -z / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -euler_gamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (psi - std::log(z));
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * specfun_eps) return ans;
    }
    throw ConvergenceError("E_n series stalled", ans);
}

// E_a(z) for non-integer a and z <= 1:
//   E_a(z) = Gamma(1-a) z^(a-1) - sum_{k>=0} (-z)^k / (k! (k+1-a)).
inline double en_series_real(double a, double z) {
    double sum = 0.0;
    double pk = 1.0;  // (-z)^k / k!
    for (int k = 0; k <= specfun_max_iter; ++k) {
        const double del = pk / (k + 1.0 - a);
        sum += del;
        if (std::abs(del) < std::abs(sum) * specfun_eps) break;
        pk *= -z / (k + 1.0);
    }
    return std::tgamma(1.0 - a) * std::pow(z, a - 1.0) - sum;
}

}  // namespace detail

/// Generalized exponential integral E_a(z) = integral_1^inf e^(-k z) k^(-a) dk
/// for real order a >= 0 and z > 0. Power series below z = 1, continued
/// fraction above; E_0 is evaluated directly as e^(-z)/z.
inline double en_general(double a, double z) {
    if (!(z > 0.0)) throw DomainError("en_general: requires z > 0");
    if (!(a >= 0.0)) throw DomainError("en_general: requires order a >= 0");
    if (a == 0.0) return std::exp(-z) / z;
    if (z > 1.0) return detail::en_contfrac(a, z);
    const double r = std::round(a);
    if (std::abs(a - r) < 1e-12 && r >= 1.0)
        return detail::en_series_int(static_cast<int>(r), z);
    return detail::en_series_real(a, z);
}

/// Cauchy principal value Ei(x) = p.v. integral_{-inf}^x e^t / t dt for x > 0,
/// by the standard power series Ei(x) = gamma + ln x + sum_{k>=1} x^k/(k k!).
/// All terms are positive, so the series is usable up to the overflow limit.
inline double ei_principal(double x) {
    if (!(x > 0.0)) throw DomainError("ei_principal: requires x > 0 (logarithmic singularity at 0)");
    double sum = 0.0;
    double pk = 1.0;  // x^k / k!
    for (int k = 1; k <= detail::specfun_max_iter; ++k) {
        pk *= x / k;
        const double del = pk / k;
        sum += del;
        if (del < sum * detail::specfun_eps)
            return euler_gamma + std::log(x) + sum;
    }
    throw ConvergenceError("ei_principal series stalled", euler_gamma + std::log(x) + sum);
}

/// Upper incomplete gamma Gamma(s,x) = integral_x^inf t^(s-1) e^(-t) dt.
///
/// s > 0 uses the series / continued-fraction split around x = s+1; s = 0 is
/// E_1(x); s < 0 (needed for power exponents between -1 and 0) descends by
///   Gamma(s,x) = (Gamma(s+1,x) - x^s e^(-x)) / s,
/// which is exact and avoids negative-order quadrature.
inline double gamma_upper(double s, double x) {
    if (std::isnan(s) || std::isnan(x)) throw DomainError("gamma_upper: nan argument");
    if (x < 0.0) throw DomainError("gamma_upper: requires x >= 0");
    if (x == 0.0) {
        if (s > 0.0) return std::tgamma(s);
        throw DomainError("gamma_upper: divergent at x = 0 for s <= 0");
    }
    if (s == 0.0) return en_general(1.0, x);
    if (s < 0.0) {
        const int shifts = static_cast<int>(std::ceil(-s));
        double sc = s + shifts;  // in [0, 1)
        double g = (sc == 0.0) ? en_general(1.0, x)
                               : (x < sc + 1.0 ? std::tgamma(sc) - detail::lower_gamma_series(sc, x)
                                               : detail::upper_gamma_contfrac(sc, x));
        for (int i = 0; i < shifts; ++i) {
            sc -= 1.0;
            g = (g - std::exp(sc * std::log(x) - x)) / sc;
        }
        return g;
    }
    if (x < s + 1.0) return std::tgamma(s) - detail::lower_gamma_series(s, x);
    return detail::upper_gamma_contfrac(s, x);
}

/// Error function erf(x) = 2/sqrt(pi) integral_0^x e^(-t^2) dt, evaluated
/// through the incomplete gamma machinery: erf(x) = gamma(1/2, x^2)/sqrt(pi)
/// near the origin, 1 - Gamma(1/2, x^2)/sqrt(pi) in the tails. Odd by
/// construction.
inline double erf(double x) {
    if (std::isnan(x)) throw DomainError("erf: nan argument");
    if (x == 0.0) return 0.0;
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    const double ax = std::abs(x);
    if (ax > 1e150) return sgn;  // x^2 would overflow; erf is 1 to every representable digit
    const double x2 = ax * ax;
    if (x2 < 1.5) return sgn * detail::lower_gamma_series(0.5, x2) * std::numbers::inv_sqrtpi_v<double>;
    return sgn * (1.0 - detail::upper_gamma_contfrac(0.5, x2) * std::numbers::inv_sqrtpi_v<double>);
}

}  // namespace expact
