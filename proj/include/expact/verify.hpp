#pragma once

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "activation.hpp"
#include "functional.hpp"
#include "oracles.hpp"
#include "simulate.hpp"
#include "specfun.hpp"

namespace expact {

/// Outcome of one verification check: the headline tolerance, the worst
/// observed deviation (or margin), and the verdict. Criteria are numbered in
/// the order the checks are reported.
struct CheckResult {
    int criterion = 0;
    std::string name;
    double tolerance = 0.0;
    double observed = 0.0;
    bool pass = false;
    std::string detail;
};

/// Per-check tolerance overrides, keyed by check name. Used to demonstrate
/// failure propagation (an unattainable tolerance must fail) and to tighten
/// checks experimentally. Unknown names are rejected.
using ToleranceOverrides = std::map<std::string, double>;

namespace verify_detail {

using oracles::relative_error;

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
}

inline void track(double err, const std::string& label, double& worst, std::string& where) {
    if (err > worst) {
        worst = err;
        where = label;
    }
}

// --- check 1: special functions vs their defining integrals ---------------

inline CheckResult check_specfun_oracles(double tol) {
    double worst = 0.0;
    std::string where = "none";
    const AccuracyPolicy pol{};

    const double orders[] = {0.0, 0.5, 1.0, 2.0};
    const double args[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    for (double a : orders)
        for (double z : args)
            track(relative_error(en_general(a, z), oracles::en_defining_integral(a, z, pol)),
                  "E_a vs defining integral, a=" + fmt(a) + " z=" + fmt(z), worst, where);

    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0})
        track(relative_error(ei_principal(x), oracles::ei_defining_integral(x, pol)),
              "Ei vs principal-value integral, x=" + fmt(x), worst, where);

    for (double s : {-1.5, -0.5, 0.5, 1.0, 2.0, 3.5})
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
            track(relative_error(gamma_upper(s, x),
                                 oracles::gamma_upper_defining_integral(s, x, pol)),
                  "Gamma vs defining integral, s=" + fmt(s) + " x=" + fmt(x), worst, where);

    for (double x : {0.1, 0.5, 1.0, 2.0, 3.0})
        track(relative_error(erf(x), oracles::erf_defining_integral(x, pol)),
              "erf vs defining integral, x=" + fmt(x), worst, where);

    // Transformation identity E_a(z) = z^(a-1) Gamma(1-a, z).
    for (double a : orders)
        for (double z : args)
            track(relative_error(en_general(a, z),
                                 std::pow(z, a - 1.0) * gamma_upper(1.0 - a, z)),
                  "E_a/Gamma transformation, a=" + fmt(a) + " z=" + fmt(z), worst, where);

    // Recurrence Gamma(s+1, x) = s Gamma(s, x) + x^s e^(-x).
    for (double s : {0.5, 1.0, 2.0})
        for (double x : {0.5, 1.0, 2.0, 5.0, 10.0})
            track(relative_error(gamma_upper(s + 1.0, x),
                                 s * gamma_upper(s, x) + std::pow(x, s) * std::exp(-x)),
                  "Gamma recurrence, s=" + fmt(s) + " x=" + fmt(x), worst, where);

    return {1, "specfun_oracle_agreement", tol, worst, worst <= tol, "worst case: " + where};
}

// --- check 2: d/dU of the energy term equals the conjugate g ---------------

inline CheckResult check_energy_identity(double tol) {
    double worst = 0.0;
    std::string where = "none";
    bool minima_ok = true;
    std::string sub;

    for (double C : {0.5, 2.0}) {
        const ControlParams p = validate(C);
        for (int sgn : {-1, 1})
            for (int k = 1; k <= 50; ++k) {
                const double U = sgn * 0.1 * k;
                const double fd =
                    oracles::central_difference([&p](double u) { return g_cost(p, u); }, U);
                track(relative_error(fd, conjugate_g(p, U)),
                      "dG/dU vs g, C=" + fmt(C) + " U=" + fmt(U), worst, where);
            }
        // The stationary value: G(+-1) = -C1 to 1e-12.
        if (std::abs(g_cost(p, 1.0) + p.C1) > 1e-12 || std::abs(g_cost(p, -1.0) + p.C1) > 1e-12) {
            minima_ok = false;
            sub += " G(+-1) != -C1 at C=" + fmt(C) + ";";
        }
    }

    // Grid minimum for C = 2 sits at |U| = 1 (the energy curve's documented
    // shape: minimum -C1 at unit control magnitude).
    {
        const ControlParams p = validate(2.0);
        double best = std::numeric_limits<double>::infinity(), at = 0.0;
        for (int k = -200; k <= 200; ++k) {
            const double U = 0.01 * k;
            const double v = g_cost(p, U);
            if (v < best) {
                best = v;
                at = U;
            }
        }
        if (std::abs(std::abs(at) - 1.0) > 1e-12) {
            minima_ok = false;
            sub += " grid argmin |U|=" + fmt(std::abs(at)) + " != 1;";
        }
    }

    return {2, "energy_term_identity", tol, worst, worst <= tol && minima_ok,
            "worst case: " + where + (sub.empty() ? "" : ";" + sub)};
}

// --- check 3: d/dS of each closed-form state term equals C^{f2} sign(S) ----

inline std::vector<FunctionalForm> closed_form_suite() {
    std::vector<FunctionalForm> forms;
    for (double C : {0.5, 2.0}) {
        forms.push_back(make_form(validate(C), IdentityExp{}));
        forms.push_back(make_form(validate(C), SqrtExp{}));
        forms.push_back(make_form(validate(C), ReciprocalExp{}));
    }
    for (double alpha : {0.7, 1.5, -0.5})
        forms.push_back(make_form(validate(0.5), PowerExp{alpha}));
    return forms;
}

inline std::string form_label(const FunctionalForm& f) {
    std::string s = std::string(exponent_case_name(f.spec)) + " C=" + fmt(f.params.C);
    if (const auto* p = std::get_if<PowerExp>(&f.spec)) s += " alpha=" + fmt(p->alpha);
    return s;
}

inline CheckResult check_state_identity(double tol) {
    double worst = 0.0;
    std::string where = "none";
    for (const auto& form : closed_form_suite()) {
        for (int sgn : {-1, 1})
            for (int k = 1; k <= 30; ++k) {
                const double S = sgn * 0.1 * k;
                const double fd = oracles::central_difference(
                    [&form](double s) { return f_state_closed(form, s); }, S);
                const double target = conjugate_f(form.params, form.spec, S);
                track(relative_error(fd, target), "dF/dS, " + form_label(form) + " S=" + fmt(S),
                      worst, where);
            }
    }
    return {3, "state_term_identity", tol, worst, worst <= tol, "worst case: " + where};
}

// --- check 4: closed-form differences vs quadrature ------------------------

inline CheckResult check_closed_numeric(double tol) {
    double worst = 0.0;
    std::string where = "none";
    for (const auto& form : closed_form_suite()) {
        const double refs[] = {default_reference_point(form), 0.5};
        for (double ref : refs)
            for (double S : {0.3, 1.0, 2.5, -1.3}) {
                if (std::abs(std::abs(S) - ref) < 1e-12) continue;
                const double closed_diff = f_state_closed(form, S) - f_state_closed(form, ref);
                const double numeric = f_state_numeric(form, S, ref);
                track(std::abs(closed_diff - numeric),
                      "F difference, " + form_label(form) + " S=" + fmt(S) + " ref=" + fmt(ref),
                      worst, where);
            }
    }
    return {4, "closed_numeric_agreement", tol, worst, worst <= tol,
            "absolute deviations; worst case: " + where};
}

// --- check 5: the power family collapses onto the special cases ------------

inline CheckResult check_reductions(double tol) {
    double worst_closed = 0.0;
    std::string where = "none";
    const double grid[] = {0.3, 0.7, 1.0, 1.7, 2.5};

    const ControlParams half = validate(0.5);
    const struct {
        double alpha;
        ExponentSpec target;
    } pairs[] = {{1.0, IdentityExp{}}, {0.5, SqrtExp{}}, {-1.0, ReciprocalExp{}}};
    for (const auto& pr : pairs) {
        const FunctionalForm power = make_form(half, PowerExp{pr.alpha});
        const FunctionalForm target = make_form(half, pr.target);
        for (int sgn : {-1, 1})
            for (double r : grid) {
                const double S = sgn * r;
                track(relative_error(f_state_closed(power, S), f_state_closed(target, S)),
                      "alpha=" + fmt(pr.alpha) + " vs " + exponent_case_name(pr.target) +
                          ", S=" + fmt(S),
                      worst_closed, where);
            }
    }

    // Quadrature branch (C = 2 puts the power form outside its closed-form
    // domain): numeric differences must still collapse onto the special-case
    // closed forms, to 1e-7 absolute.
    const double quad_tol = 1e-7;
    double worst_quad = 0.0;
    std::string where_quad = "none";
    const ControlParams two = validate(2.0);
    for (const auto& pr : pairs) {
        const FunctionalForm power = make_form(two, PowerExp{pr.alpha});
        const FunctionalForm target = make_form(two, pr.target);
        const double ref = default_reference_point(power);
        for (double S : grid) {
            const double numeric = f_state_numeric(power, S, ref);
            const double closed = f_state_closed(target, S) - f_state_closed(target, ref);
            track(std::abs(numeric - closed),
                  "quadrature alpha=" + fmt(pr.alpha) + " vs " + exponent_case_name(pr.target) +
                      ", S=" + fmt(S),
                  worst_quad, where_quad);
        }
    }

    const bool pass = worst_closed <= tol && worst_quad <= quad_tol;
    return {5, "reduction_chain", tol, worst_closed, pass,
            "closed branch worst: " + where + "; quadrature branch worst " + fmt(worst_quad) +
                " (tol " + fmt(quad_tol) + ") at " + where_quad};
}

// --- check 6: simulated arrival times vs separable-ODE references ----------

inline CheckResult check_reach_times(double tol) {
    double worst = 0.0;
    std::string where = "none";
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.dead_zone = 1e-9;
    cfg.x0 = {1.0};
    const PlantModel plant = ScalarIntegrator{};

    auto run = [&](auto&& law, double horizon, double expect, const std::string& label) {
        SimConfig c = cfg;
        c.horizon = horizon;
        const Trajectory traj = simulate_closed_loop(plant, law, c);
        const double got = traj.reached_origin_at ? *traj.reached_origin_at
                                                  : std::numeric_limits<double>::infinity();
        track(std::abs(got - expect), label + " arrival", worst, where);
    };

    const PowerLawParams relay{0.0};
    run([&relay](double s) { return power_control(relay, s); }, 1.5,
        analytic_reach_time(relay, 1.0).value, "relay");

    const PowerLawParams root{0.5};
    run([&root](double s) { return power_control(root, s); }, 2.5,
        analytic_reach_time(root, 1.0).value, "power alpha=0.5");

    const ControlParams two = validate(2.0);
    const ExponentSpec ident = IdentityExp{};
    run([&](double s) { return control_u(two, ident, s); }, 1.0,
        analytic_reach_time(two, ident, 1.0).value, "identity C=2");

    return {6, "reach_time_agreement", tol, worst, worst <= tol,
            "absolute arrival-time deviations; worst case: " + where};
}

// --- check 7: arrival time grows strictly with the power exponent ----------

inline CheckResult check_alpha_monotonicity(double tol) {
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 11.0;
    cfg.dead_zone = 1e-9;
    std::vector<double> alphas;
    for (int k = 1; k <= 9; ++k) alphas.push_back(0.1 * k);
    const AlphaSweepResult sweep = alpha_sweep(alphas, 1.0, cfg);

    double min_gap = std::numeric_limits<double>::infinity();
    bool all_reached = true;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        if (!sweep.rows[i].reach_time) {
            all_reached = false;
            continue;
        }
        if (i > 0 && sweep.rows[i - 1].reach_time)
            min_gap = std::min(min_gap, *sweep.rows[i].reach_time - *sweep.rows[i - 1].reach_time);
    }
    const bool pass = all_reached && min_gap > tol;
    std::ostringstream os;
    os << "smallest adjacent arrival-time increase over alpha in {0.1..0.9}";
    if (!all_reached) os << "; some runs never arrived";
    return {7, "alpha_sweep_monotonicity", tol, min_gap, pass, os.str()};
}

// --- check 8: the loop minimizes its own functional (identity case) --------

inline CheckResult check_variational(double tol) {
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.dead_zone = 1e-9;
    cfg.x0 = {1.0};

    const FunctionalForm identity = make_form(validate(2.0), IdentityExp{});
    const VariationalReport main = variational_test(identity, 1.0, 0.7, {1, 2, 3},
                                                    {0.01, 0.05, 0.1}, cfg);
    double min_dj = std::numeric_limits<double>::infinity();
    bool any_rejected = false;
    for (const auto& s : main.samples) {
        if (s.rejected) any_rejected = true;
        else min_dj = std::min(min_dj, s.delta_j);
    }
    double worst_ratio_dev = 0.0;
    for (double r : main.ratios) worst_ratio_dev = std::max(worst_ratio_dev, std::abs(r - 4.0));

    const bool pass =
        main.asserted && main.all_positive && main.scaling_ok && !any_rejected && min_dj > tol;

    // Report-only probes for the other closed forms: one bump each, the
    // horizon capped below the measured arrival time.
    std::ostringstream os;
    os << "identity C=2: min dJ " << fmt(min_dj) << ", worst |ratio-4| " << fmt(worst_ratio_dev)
       << "; report-only:";
    const std::vector<std::pair<std::string, FunctionalForm>> others = {
        {"sqrt C=2", make_form(validate(2.0), SqrtExp{})},
        {"reciprocal C=2", make_form(validate(2.0), ReciprocalExp{})},
        {"power C=0.5 alpha=0.7", make_form(validate(0.5), PowerExp{0.7})},
    };
    for (const auto& [label, form] : others) {
        SimConfig pilot = cfg;
        pilot.horizon = 20.0;
        const Trajectory probe = simulate_closed_loop(
            ScalarIntegrator{}, [&form](double s) { return control_u(form.params, form.spec, s); },
            pilot);
        const double horizon = 0.8 * probe.reached_origin_at.value_or(pilot.horizon);
        const VariationalReport rep = variational_test(form, 1.0, horizon, {1}, {0.05}, cfg);
        os << " " << label << " dJ=" << fmt(rep.samples.front().delta_j)
           << (rep.samples.front().rejected ? " (rejected)" : "") << ";";
    }

    return {8, "variational_minimality", tol, min_dj, pass, os.str()};
}

}  // namespace verify_detail

/// Runs the full verification suite: special-function oracle agreement,
/// derivative identities for the energy and state terms, closed-vs-numeric
/// agreement, the power-family reduction chain, arrival-time references, the
/// exponent monotonicity claim, and the variational minimality probe. One
/// result per criterion, in order. Overrides replace a check's headline
/// tolerance by name; unknown names are rejected.
inline std::vector<CheckResult> run_verification(const ToleranceOverrides& overrides = {}) {
    static const std::map<std::string, double> defaults = {
        {"specfun_oracle_agreement", 1e-9},  {"energy_term_identity", 1e-6},
        {"state_term_identity", 1e-6},       {"closed_numeric_agreement", 1e-7},
        {"reduction_chain", 1e-9},           {"reach_time_agreement", 2e-4},
        {"alpha_sweep_monotonicity", 0.0},   {"variational_minimality", 0.0},
    };
    for (const auto& [name, value] : overrides) {
        if (!defaults.count(name)) throw DomainError("run_verification: unknown check name: " + name);
        if (std::isnan(value)) throw DomainError("run_verification: nan tolerance for " + name);
    }
    auto tol = [&](const char* name) {
        auto it = overrides.find(name);
        return it != overrides.end() ? it->second : defaults.at(name);
    };

    std::vector<CheckResult> results;
    results.push_back(verify_detail::check_specfun_oracles(tol("specfun_oracle_agreement")));
    results.push_back(verify_detail::check_energy_identity(tol("energy_term_identity")));
    results.push_back(verify_detail::check_state_identity(tol("state_term_identity")));
    results.push_back(verify_detail::check_closed_numeric(tol("closed_numeric_agreement")));
    results.push_back(verify_detail::check_reductions(tol("reduction_chain")));
    results.push_back(verify_detail::check_reach_times(tol("reach_time_agreement")));
    results.push_back(verify_detail::check_alpha_monotonicity(tol("alpha_sweep_monotonicity")));
    results.push_back(verify_detail::check_variational(tol("variational_minimality")));
    return results;
}

inline bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace expact
