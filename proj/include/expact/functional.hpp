#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "activation.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "trajectory.hpp"

namespace expact {

/// How the state term F of a constructed functional is evaluated.
enum class FMode { ClosedForm, Quadrature };

/// A constructed quality functional: the integrand F(S) + G(U) whose
/// minimizing feedback is U = -C^{f2(|S|)} * sign(S). Holds the validated
/// parameters, the exponent shape, and which F evaluation path applies.
struct FunctionalForm {
    ControlParams params;
    ExponentSpec spec;
    FMode f_mode = FMode::Quadrature;
    bool closed_form_valid = false;
    std::string validity_reason;
};

/// True when f2 has a pole at S = 0 (reciprocal or negative-power term), so
/// that C^{f2} diverges there for C > 1 and F has no finite value at the
/// origin.
inline bool has_singular_origin(const ExponentSpec& spec) {
    auto basic_singular = [](const BasicExponent& e) {
        if (std::holds_alternative<ReciprocalExp>(e)) return true;
        if (const auto* p = std::get_if<PowerExp>(&e)) return p->alpha < 0.0;
        return false;
    };
    if (const auto* add = std::get_if<AdditiveExp>(&spec)) {
        for (const auto& t : add->terms)
            if (basic_singular(t.inner)) return true;
        return false;
    }
    if (std::holds_alternative<ReciprocalExp>(spec)) return true;
    if (const auto* p = std::get_if<PowerExp>(&spec)) return p->alpha < 0.0;
    return false;
}

/// Closed-form validity table. Identity and Sqrt integrate in elementary
/// terms for every admissible C. Reciprocal closes via E1 (0 < C < 1) or the
/// principal-value Ei (C > 1). Power closes via the upper incomplete gamma
/// only for 0 < C < 1 — for C > 1 the gamma argument would be negative, which
/// has no canonical real value, so quadrature is used. Additive and Scheduled
/// are always numeric.
inline FunctionalForm make_form(const ControlParams& params_in, const ExponentSpec& spec) {
    const ControlParams params = validate(params_in);
    validate(spec);
    FunctionalForm form{params, spec, FMode::Quadrature, false, ""};
    struct Classify {
        double C;
        FunctionalForm& f;
        void operator()(const IdentityExp&) const { closed("elementary closed form for any valid C"); }
        void operator()(const SqrtExp&) const { closed("elementary closed form for any valid C"); }
        void operator()(const ReciprocalExp&) const {
            closed(C < 1.0 ? "closed form via the generalized exponential integral E1"
                           : "closed form via the principal-value exponential integral Ei");
        }
        void operator()(const PowerExp&) const {
            if (C < 1.0)
                closed("closed form via the upper incomplete gamma function");
            else
                open("negative gamma argument; quadrature fallback");
        }
        void operator()(const AdditiveExp&) const { open("additive exponent; quadrature fallback"); }
        void operator()(const ScheduledExp&) const { open("scheduled exponent; quadrature fallback"); }
        void closed(std::string reason) const {
            f.f_mode = FMode::ClosedForm;
            f.closed_form_valid = true;
            f.validity_reason = std::move(reason);
        }
        void open(std::string reason) const {
            f.f_mode = FMode::Quadrature;
            f.closed_form_valid = false;
            f.validity_reason = std::move(reason);
        }
    };
    std::visit(Classify{params.C, form}, spec);
    return form;
}

/// Energy cost G(U) = C1|U| ln|U| - C1|U|, the antiderivative of the
/// conjugate g. Even in U; G(0) = 0 by the |U| ln|U| -> 0 limit; for C > 1
/// its minimum is -C1, attained at |U| = 1.
inline double g_cost(const ControlParams& params, double U) {
    if (U == 0.0) return 0.0;
    const double a = std::abs(U);
    return params.C1 * a * std::log(a) - params.C1 * a;
}

/// Closed-form state cost F(S), per the validity table in make_form:
///   Identity      F = C1 C^|S|
///   Sqrt          F = 2 C1 C^sqrt|S| (sqrt|S| - C1)
///   Reciprocal    F = |S| C^(1/|S|) + ln C * E1(-ln C/|S|)      (0 < C < 1)
///                 F = |S| C^(1/|S|) - ln C * Ei(ln C/|S|)       (C > 1)
///   Power         F = |S| C^(|S|^a) - (-ln C)^(-1/a) Gamma((a+1)/a, -ln C |S|^a)
///                                                               (0 < C < 1)
/// Each satisfies dF/dS = C^{f2(|S|)} sign(S); F is even in S. At S = 0 the
/// origin-singular shapes take their removable limit 0 when 0 < C < 1; the
/// reciprocal shape with C > 1 diverges there and throws SingularityError.
inline double f_state_closed(const FunctionalForm& form, double S) {
    if (!form.closed_form_valid)
        throw NotClosedFormError("f_state_closed: " + form.validity_reason +
                                 " — use f_state_numeric");
    const double C = form.params.C;
    const double C1 = form.params.C1;
    const double lnC = std::log(C);
    const double r = std::abs(S);
    struct Eval {
        double C, C1, lnC, r;
        double operator()(const IdentityExp&) const { return C1 * std::exp(r * lnC); }
        double operator()(const SqrtExp&) const {
            const double root = std::sqrt(r);
            return 2.0 * C1 * std::exp(root * lnC) * (root - C1);
        }
        double operator()(const ReciprocalExp&) const {
            if (r == 0.0) {
                // Removable for C < 1: |S| C^{1/|S|} and E1(-ln C/|S|) both
                // vanish. For C > 1 the state term genuinely diverges.
                if (C < 1.0) return 0.0;
                throw SingularityError("f_state_closed: reciprocal state term is singular at S = 0");
            }
            const double head = r * std::exp(lnC / r);
            if (C < 1.0) return head + lnC * en_general(1.0, -lnC / r);
            return head - lnC * ei_principal(lnC / r);
        }
        double operator()(const PowerExp& p) const {
            // The closed branch only exists for C < 1, where the alpha < 0
            // limit at the origin is removable: both terms vanish.
            if (r == 0.0 && p.alpha < 0.0) return 0.0;
            const double x = -lnC * std::pow(r, p.alpha);
            const double s = (p.alpha + 1.0) / p.alpha;
            return r * std::exp(lnC * std::pow(r, p.alpha)) -
                   std::pow(-lnC, -1.0 / p.alpha) * gamma_upper(s, x);
        }
        double operator()(const AdditiveExp&) const { return 0.0; }   // unreachable
        double operator()(const ScheduledExp&) const { return 0.0; }  // unreachable
    };
    return std::visit(Eval{C, C1, lnC, r}, form.spec);
}

/// Reference point for quadrature-mode F values: 0 when the integrand
/// C^{f2(sigma)} is integrable at the origin, 1 when F diverges there
/// (origin-singular exponent with C > 1), so the integration path never
/// touches the divergence.
inline double default_reference_point(const FunctionalForm& form) {
    return (has_singular_origin(form.spec) && form.params.C > 1.0) ? 1.0 : 0.0;
}

/// Numeric state cost: F(S) - F(S_ref) = integral of C^{f2(sigma)} over
/// sigma from |S_ref| to |S|. Because f(sigma) = C^{f2(|sigma|)} sign(sigma)
/// is odd, F is even and the path can run over positive sigma only, which
/// keeps it clear of the S = 0 singularity of reciprocal-type exponents.
/// Works for every exponent variant, including Additive and Scheduled.
inline double f_state_numeric(const FunctionalForm& form, double S, double S_ref,
                              const AccuracyPolicy& policy = {}) {
    const double r1 = std::abs(S);
    const double r0 = std::abs(S_ref);
    if (r0 == r1) return 0.0;
    const double lnC = std::log(form.params.C);
    const auto& spec = form.spec;
    auto f = [&](double sigma) { return std::exp(f2_eval(spec, sigma) * lnC); };
    const double lo = std::min(r0, r1);
    const double hi = std::max(r0, r1);
    const double value = quad_adaptive(f, lo, hi, policy);
    return r1 >= r0 ? value : -value;
}

/// Stateful F evaluator for trajectory sweeps. Closed forms are evaluated
/// directly; quadrature forms are accumulated incrementally from the last
/// queried point, so a long monotone trajectory costs one short panel per
/// sample instead of one full integral.
class FStateEvaluator {
public:
    explicit FStateEvaluator(const FunctionalForm& form, AccuracyPolicy policy = {})
        : form_(form), policy_(policy), s_ref_(default_reference_point(form)) {
        check_policy(policy_);
    }

    double operator()(double S) {
        if (form_.f_mode == FMode::ClosedForm) return f_state_closed(form_, S);
        const double r = std::abs(S);
        if (!have_last_) {
            last_f_ = f_state_numeric(form_, r, s_ref_, policy_);
            last_r_ = r;
            have_last_ = true;
        } else if (r != last_r_) {
            last_f_ += f_state_numeric(form_, r, last_r_, policy_);
            last_r_ = r;
        }
        return last_f_;
    }

    double reference() const noexcept { return s_ref_; }

private:
    FunctionalForm form_;
    AccuracyPolicy policy_;
    double s_ref_;
    bool have_last_ = false;
    double last_r_ = 0.0;
    double last_f_ = 0.0;
};

/// F at the origin (the equilibrium), used for baseline subtraction so that
/// finite-horizon costs stop growing after arrival. Closed forms use their
/// S -> 0 limits; quadrature forms are already measured relative to the
/// origin, so their baseline is zero. Throws when F diverges at the origin
/// (origin-singular exponent with C > 1).
inline double equilibrium_baseline(const FunctionalForm& form) {
    if (has_singular_origin(form.spec) && form.params.C > 1.0)
        throw DomainError(
            "equilibrium_baseline: state term diverges at the origin for this exponent with C > 1");
    if (form.f_mode == FMode::Quadrature) return 0.0;  // F values are relative to S_ref = 0
    return f_state_closed(form, 0.0);  // closed forms take their S -> 0 limit at the origin
}

/// One integrand sample F(S) + G(U), minus an optional baseline (typically
/// equilibrium_baseline) to make finite-horizon comparisons meaningful.
inline double integrand(const FunctionalForm& form, double S, double U,
                        std::optional<double> baseline = std::nullopt) {
    const double f = form.f_mode == FMode::ClosedForm
                         ? f_state_closed(form, S)
                         : f_state_numeric(form, S, default_reference_point(form));
    return f + g_cost(form.params, U) - baseline.value_or(0.0);
}

/// Split of an accumulated functional value: j_total = j_state + j_energy
/// over the stated horizon.
struct JBreakdown {
    double j_total = 0.0;
    double j_state = 0.0;
    double j_energy = 0.0;
    double horizon = 0.0;
};

/// Accumulates the functional along a uniformly sampled trajectory by the
/// composite trapezoidal rule (control signals can have a kink at sliding
/// onset, so a second-order rule is the right fit). The optional baseline is
/// subtracted from every F sample. Singular F samples (reciprocal exponent
/// evaluated at S = 0) propagate as exceptions.
inline JBreakdown j_along_trajectory(const FunctionalForm& form, const Trajectory& traj,
                                     std::optional<double> baseline = std::nullopt,
                                     AccuracyPolicy policy = {}) {
    JBreakdown out;
    const std::size_t n = traj.size();
    if (n < 2) return out;
    const double base = baseline.value_or(0.0);
    FStateEvaluator f_of(form, policy);
    double sum_f = 0.0, sum_g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum_f += w * (f_of(traj.s_values[i]) - base);
        sum_g += w * g_cost(form.params, traj.u_values[i]);
    }
    const double dt = (traj.times.back() - traj.times.front()) / static_cast<double>(n - 1);
    out.j_state = dt * sum_f;
    out.j_energy = dt * sum_g;
    out.j_total = out.j_state + out.j_energy;
    out.horizon = traj.times.back() - traj.times.front();
    return out;
}

/// Human- and machine-readable description of a constructed functional, for
/// reports: formula texts, validity verdict, and the special functions the
/// closed form rests on.
struct FormDescription {
    std::string case_name;
    std::string f_text;
    std::string g_text;
    bool closed_form_valid = false;
    std::string validity_reason;
    std::vector<std::string> special_functions_used;
};

inline const char* exponent_case_name(const ExponentSpec& spec) {
    struct Name {
        const char* operator()(const IdentityExp&) const { return "identity"; }
        const char* operator()(const SqrtExp&) const { return "sqrt"; }
        const char* operator()(const ReciprocalExp&) const { return "reciprocal"; }
        const char* operator()(const PowerExp&) const { return "power"; }
        const char* operator()(const AdditiveExp&) const { return "additive"; }
        const char* operator()(const ScheduledExp&) const { return "scheduled"; }
    };
    return std::visit(Name{}, spec);
}

inline FormDescription describe_form(const FunctionalForm& form) {
    FormDescription d;
    d.case_name = exponent_case_name(form.spec);
    d.g_text = "C1*|U|*ln|U| - C1*|U|";
    d.closed_form_valid = form.closed_form_valid;
    d.validity_reason = form.validity_reason;
    const double C = form.params.C;
    struct Describe {
        double C;
        FormDescription& d;
        void operator()(const IdentityExp&) const { d.f_text = "C1*C^|S|"; }
        void operator()(const SqrtExp&) const { d.f_text = "2*C1*C^sqrt(|S|)*(sqrt(|S|) - C1)"; }
        void operator()(const ReciprocalExp&) const {
            if (C < 1.0) {
                d.f_text = "|S|*C^(1/|S|) + ln(C)*E1(-ln(C)/|S|)";
                d.special_functions_used.push_back("E1 (generalized exponential integral)");
            } else {
                d.f_text = "|S|*C^(1/|S|) - ln(C)*Ei(ln(C)/|S|)";
                d.special_functions_used.push_back("Ei (principal value)");
            }
        }
        void operator()(const PowerExp&) const {
            if (C < 1.0) {
                d.f_text =
                    "|S|*C^(|S|^alpha) - (-ln(C))^(-1/alpha)*Gamma((alpha+1)/alpha, -ln(C)*|S|^alpha)";
                d.special_functions_used.push_back("Gamma (upper incomplete)");
            } else {
                d.f_text = "numeric quadrature of C^(|S|^alpha)";
            }
        }
        void operator()(const AdditiveExp&) const {
            d.f_text = "numeric quadrature of C^(sum_i w_i*f2_i(|S|))";
            d.special_functions_used.push_back("erf (not implemented in closed form)");
        }
        void operator()(const ScheduledExp&) const {
            d.f_text = "numeric quadrature of C^(|S|^alpha(|S|))";
        }
    };
    std::visit(Describe{C, d}, form.spec);
    return d;
}

}  // namespace expact
