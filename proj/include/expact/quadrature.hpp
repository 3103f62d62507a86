#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace expact {

/// Accuracy contract shared by the adaptive integrator and everything
/// validated against it.
struct AccuracyPolicy {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_subdivisions = 10000;
};

inline void check_policy(const AccuracyPolicy& policy) {
    if (!(policy.rel_tol > 0.0)) throw DomainError("AccuracyPolicy: rel_tol must be > 0");
    if (!(policy.abs_tol > 0.0)) throw DomainError("AccuracyPolicy: abs_tol must be > 0");
    if (policy.max_subdivisions < 1) throw DomainError("AccuracyPolicy: max_subdivisions must be >= 1");
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule, positive nodes.
// Even indices are Kronrod-only points (Gauss weight zero), index 7 is the
// interval midpoint.
inline constexpr double gk15_node[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_kw[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk15_gw[8] = {
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

// Error charged to a panel whose samples are not finite. Large enough to
// dominate any genuine error estimate, but finite so the running error sum
// stays exact under add/subtract bookkeeping (an infinity would turn it into
// NaN on removal and silently end the adaptive loop).
inline constexpr double unresolved_panel_error = 1e300;

// One Gauss-Kronrod 7/15 evaluation with the usual resasc-sharpened error
// estimate. A non-finite sample marks the panel as infinitely wrong so the
// adaptive loop keeps splitting around the offending point.
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[8][2];
    const double fc = f(mid);
    fv[7][0] = fc;
    fv[7][1] = 0.0;

    double resg = gk15_gw[7] * fc;
    double resk = gk15_kw[7] * fc;
    double resabs = gk15_kw[7] * std::abs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk15_node[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        fv[i][0] = f1;
        fv[i][1] = f2;
        resg += gk15_gw[i] * (f1 + f2);
        resk += gk15_kw[i] * (f1 + f2);
        resabs += gk15_kw[i] * (std::abs(f1) + std::abs(f2));
    }

    const double reskh = resk * 0.5;
    double resasc = gk15_kw[7] * std::abs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += gk15_kw[i] * (std::abs(fv[i][0] - reskh) + std::abs(fv[i][1] - reskh));

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * half;
    if (!std::isfinite(p.value)) {
        // Keep the poisoned estimate out of the running total (it would make
        // the relative tolerance infinite); the huge error keeps the adaptive
        // loop splitting around the offending point until the panel budget
        // runs out or the singularity is isolated at machine resolution.
        p.value = 0.0;
        p.error = unresolved_panel_error;
        return p;
    }

    const double ahalf = std::abs(half);
    resabs *= ahalf;
    resasc *= ahalf;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
    p.error = err;
    return p;
}

template <class F>
double quad_adaptive_finite(F&& f, double lower, double upper, const AccuracyPolicy& policy) {
    using Queue = std::priority_queue<Panel, std::vector<Panel>, PanelWorse>;
    Queue queue;
    queue.push(gk15(f, lower, upper));

    double total = queue.top().value;
    double total_err = queue.top().error;
    double stuck_err = 0.0;  // panels too narrow to split further

    const auto tolerance = [&] { return std::max(policy.abs_tol, policy.rel_tol * std::abs(total)); };

    int splits = 0;
    while (total_err + stuck_err > tolerance()) {
        if (queue.empty() || splits >= policy.max_subdivisions)
            throw ConvergenceError("quad_adaptive: accuracy goal not met after " +
                                       std::to_string(splits) + " subdivisions",
                                   total);
        Panel worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine resolution
            total += worst.value;
            stuck_err += worst.error;
            continue;
        }

        ++splits;
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value;
        total_err += left.error + right.error;
        queue.push(left);
        queue.push(right);
    }
    return total;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of `integrand` over [lower, upper].
///
/// An infinite upper limit is handled by the variable change
/// t = lower + u/(1-u), u in [0,1), so exponentially decaying tails are
/// integrated on a finite interval. Throws ConvergenceError (carrying the
/// last estimate) when the panel budget runs out before the requested
/// accuracy is reached.
template <class F>
double quad_adaptive(F&& integrand, double lower, double upper, const AccuracyPolicy& policy = {}) {
    check_policy(policy);
    if (std::isnan(lower) || std::isnan(upper) || std::isinf(lower))
        throw DomainError("quad_adaptive: bounds must be finite (upper may be +inf)");
    if (!(upper > lower)) throw DomainError("quad_adaptive: requires upper > lower");

    if (std::isinf(upper)) {
        auto g = [&](double u) {
            const double w = 1.0 - u;
            const double fv = integrand(lower + u / w);
            if (fv == 0.0) return 0.0;  // keep underflowed tails from turning into 0*inf
            return fv / (w * w);
        };
        return detail::quad_adaptive_finite(g, 0.0, 1.0, policy);
    }
    return detail::quad_adaptive_finite(std::forward<F>(integrand), lower, upper, policy);
}

}  // namespace expact
