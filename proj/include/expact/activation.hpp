#pragma once

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace expact {

/// Base C of the exponential activation together with the derived constant
/// C1 = 1/ln C that appears in every closed form. Construct through
/// validate() so the invariants C > 0, C != 1 are established once.
struct ControlParams {
    double C = 2.0;
    double C1 = 0.0;
};

/// Checked constructor for ControlParams. The base must be positive (real
/// exponentiation with fractional exponents) and different from 1 (ln C = 0
/// would make C1 undefined).
inline ControlParams validate(double C) {
    if (std::isnan(C)) throw DomainError("ControlParams: base C is nan");
    if (C == 1.0) throw DomainError("ControlParams: degenerate base C = 1 (ln C = 0)");
    if (!(C > 0.0))
        throw DomainError("ControlParams: base C must be positive for real-valued C^x");
    return ControlParams{C, 1.0 / std::log(C)};
}

inline ControlParams validate(const ControlParams& p) { return validate(p.C); }

// --- Exponent variants -----------------------------------------------------
//
// The control law is U = -C^{f2(|S|)} * sign(S); the variants below are the
// supported shapes of f2. Additive combinations are restricted to one level:
// an AdditiveExp mixes non-additive terms only.

struct IdentityExp {};    // f2 = |S|
struct SqrtExp {};        // f2 = sqrt(|S|)
struct ReciprocalExp {};  // f2 = 1/|S|

struct PowerExp {
    double alpha = 1.0;  // f2 = |S|^alpha, alpha != 0
};

/// Piecewise-linear gain schedule |S| -> alpha in (0, 1]: f2 = |S|^alpha(|S|).
/// Realizes the variable-exponent controller idea (relay-like behaviour where
/// alpha is small); demo-only, always evaluated by quadrature.
struct ScheduledExp {
    std::vector<std::pair<double, double>> knots;  // (|S| breakpoint, alpha), breakpoints increasing

    double alpha_at(double abs_s) const {
        if (abs_s <= knots.front().first) return knots.front().second;
        if (abs_s >= knots.back().first) return knots.back().second;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (abs_s <= knots[i].first) {
                const double x0 = knots[i - 1].first, a0 = knots[i - 1].second;
                const double x1 = knots[i].first, a1 = knots[i].second;
                return a0 + (abs_s - x0) / (x1 - x0) * (a1 - a0);
            }
        }
        return knots.back().second;
    }
};

using BasicExponent = std::variant<IdentityExp, SqrtExp, ReciprocalExp, PowerExp, ScheduledExp>;

struct AdditiveTerm {
    double weight = 1.0;
    BasicExponent inner;
};

struct AdditiveExp {
    std::vector<AdditiveTerm> terms;  // at least one
};

using ExponentSpec =
    std::variant<IdentityExp, SqrtExp, ReciprocalExp, PowerExp, AdditiveExp, ScheduledExp>;

namespace detail {

// f2 evaluated at r = |S|, one overload per variant.
inline double f2_one(const IdentityExp&, double r) { return r; }
inline double f2_one(const SqrtExp&, double r) { return std::sqrt(r); }
inline double f2_one(const ReciprocalExp&, double r) {
    if (r == 0.0) throw SingularityError("f2_eval: reciprocal exponent has a pole at S = 0");
    return 1.0 / r;
}
inline double f2_one(const PowerExp& p, double r) {
    if (r == 0.0 && p.alpha < 0.0)
        throw SingularityError("f2_eval: |S|^alpha has a pole at S = 0 for alpha < 0");
    return std::pow(r, p.alpha);
}
inline double f2_one(const ScheduledExp& s, double r) {
    return r == 0.0 ? 0.0 : std::pow(r, s.alpha_at(r));
}

// d f2(|S|)/dS at r = |S| > 0, sgn = sign(S).
inline double df2_one(const IdentityExp&, double r, double sgn) {
    (void)r;
    return sgn;
}
inline double df2_one(const SqrtExp&, double r, double sgn) { return sgn / (2.0 * std::sqrt(r)); }
inline double df2_one(const ReciprocalExp&, double r, double sgn) { return -sgn / (r * r); }
inline double df2_one(const PowerExp& p, double r, double sgn) {
    return sgn * p.alpha * std::pow(r, p.alpha - 1.0);
}
inline double df2_one(const ScheduledExp& s, double r, double sgn) {
    // f2 = exp(alpha(r) ln r); alpha is piecewise linear, so on segment
    // interiors d f2/dr = r^alpha (alpha'(r) ln r + alpha/r). At knots the
    // one-sided slopes differ; the flat extension (slope 0) is used there.
    const double a = s.alpha_at(r);
    double slope = 0.0;
    for (std::size_t i = 1; i < s.knots.size(); ++i) {
        if (r > s.knots[i - 1].first && r < s.knots[i].first) {
            slope = (s.knots[i].second - s.knots[i - 1].second) /
                    (s.knots[i].first - s.knots[i - 1].first);
            break;
        }
    }
    return sgn * std::pow(r, a) * (slope * std::log(r) + a / r);
}

inline void validate_basic(const BasicExponent& e) {
    if (const auto* p = std::get_if<PowerExp>(&e)) {
        if (std::isnan(p->alpha) || p->alpha == 0.0)
            throw DomainError("PowerExp: alpha must be a nonzero real");
    } else if (const auto* s = std::get_if<ScheduledExp>(&e)) {
        if (s->knots.empty()) throw DomainError("ScheduledExp: schedule needs at least one knot");
        double prev = -1.0;
        for (const auto& [x, a] : s->knots) {
            if (!(x >= 0.0)) throw DomainError("ScheduledExp: breakpoints must be >= 0");
            if (!(x > prev)) throw DomainError("ScheduledExp: breakpoints must be strictly increasing");
            if (!(a > 0.0 && a <= 1.0)) throw DomainError("ScheduledExp: alpha values must lie in (0, 1]");
            prev = x;
        }
    }
}

}  // namespace detail

/// Structural validation of an exponent description (alpha != 0, additive
/// term count, schedule shape). Throws DomainError on violation.
inline void validate(const ExponentSpec& spec) {
    if (const auto* add = std::get_if<AdditiveExp>(&spec)) {
        if (add->terms.empty()) throw DomainError("AdditiveExp: needs at least one term");
        for (const auto& t : add->terms) {
            if (std::isnan(t.weight)) throw DomainError("AdditiveExp: nan weight");
            detail::validate_basic(t.inner);
        }
        return;
    }
    std::visit(
        [](const auto& v) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(v)>, AdditiveExp>)
                detail::validate_basic(BasicExponent{v});
        },
        spec);
}

/// Exponent value f2(|S|). Every variant is even in S; Reciprocal (and Power
/// with alpha < 0) rejects S = 0.
inline double f2_eval(const ExponentSpec& spec, double S) {
    const double r = std::abs(S);
    return std::visit(
        [r](const auto& v) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, AdditiveExp>) {
                double sum = 0.0;
                for (const auto& t : v.terms)
                    sum += t.weight * std::visit([r](const auto& b) { return detail::f2_one(b, r); },
                                                 t.inner);
                return sum;
            } else {
                return detail::f2_one(v, r);
            }
        },
        spec);
}

/// Analytic derivative d f2(|S|)/dS, including the sign(S) factor contributed
/// by |S|. Every variant has a cusp or pole at S = 0, so S = 0 is rejected.
inline double f2_derivative(const ExponentSpec& spec, double S) {
    if (S == 0.0)
        throw SingularityError("f2_derivative: every exponent variant is non-smooth at S = 0");
    const double r = std::abs(S);
    const double sgn = S > 0.0 ? 1.0 : -1.0;
    return std::visit(
        [r, sgn](const auto& v) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, AdditiveExp>) {
                double sum = 0.0;
                for (const auto& t : v.terms)
                    sum += t.weight *
                           std::visit([r, sgn](const auto& b) { return detail::df2_one(b, r, sgn); },
                                      t.inner);
                return sum;
            } else {
                return detail::df2_one(v, r, sgn);
            }
        },
        spec);
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Default saturation bound for the control magnitude. The reciprocal
/// exponent with C > 1 sends C^{1/|S|} to infinity as S -> 0; clamping keeps
/// the simulator finite.
inline constexpr double default_u_max = 1e6;

/// The feedback law U = -C^{f2(|S|)} * sign(S), with sign(0) = 0 so that the
/// origin is an equilibrium, and the magnitude clamped at u_max. The clamp is
/// applied in exponent space, so no intermediate overflow occurs.
inline double control_u(const ControlParams& params, const ExponentSpec& spec, double S,
                        double u_max = default_u_max) {
    if (S == 0.0) return 0.0;
    const double expo = f2_eval(spec, S) * std::log(params.C);
    const double mag = expo >= std::log(u_max) ? u_max : std::exp(expo);
    return -sign(S) * mag;
}

/// The conjugate function f(S) = C^{f2(|S|)} * sign(S): the unsaturated
/// negative of the control law, and the integrand whose antiderivative is the
/// state cost F.
inline double conjugate_f(const ControlParams& params, const ExponentSpec& spec, double S) {
    if (S == 0.0) return 0.0;
    return sign(S) * std::exp(f2_eval(spec, S) * std::log(params.C));
}

/// Power-law family U = -|S|^alpha * sign(S) with alpha in [0, 1]: relay at
/// alpha = 0, linear at alpha = 1.
struct PowerLawParams {
    double alpha = 0.5;
};

inline PowerLawParams validate(const PowerLawParams& p) {
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0))
        throw DomainError("PowerLawParams: alpha must lie in [0, 1]");
    return p;
}

inline double power_control(const PowerLawParams& p, double S) {
    if (S == 0.0) return 0.0;
    if (p.alpha == 0.0) return -sign(S);
    return -std::pow(std::abs(S), p.alpha) * sign(S);
}

/// Variable-exponent demo law U = -|S|^{alpha(|S|)} * sign(S): the power-law
/// family with the exponent scheduled on the current surface distance.
inline double scheduled_power_control(const ScheduledExp& sched, double S) {
    if (S == 0.0) return 0.0;
    return -std::pow(std::abs(S), sched.alpha_at(std::abs(S))) * sign(S);
}

/// Conjugate of the activation: g(U) = log_C|U| * sign(U). Odd, zero at
/// |U| = 1, logarithmically singular at U = 0 (the antiderivative G handles
/// that limit; g itself does not).
inline double conjugate_g(const ControlParams& params, double U) {
    if (U == 0.0)
        throw SingularityError("conjugate_g: logarithmic singularity at U = 0");
    return params.C1 * std::log(std::abs(U)) * sign(U);
}

}  // namespace expact
