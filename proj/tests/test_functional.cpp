#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "expact/functional.hpp"
#include "expact/oracles.hpp"
#include "expact/trajectory.hpp"

using namespace expact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double inv_ln2 = 1.4426950408889634074;  // C1 for C = 2

FunctionalForm form_of(double C, ExponentSpec spec) { return make_form(validate(C), spec); }

}  // namespace

TEST_CASE("closed-form validity table", "[functional]") {
    struct Row {
        double C;
        ExponentSpec spec;
        FMode mode;
        const char* reason;
    };
    const std::vector<Row> rows = {
        {2.0, IdentityExp{}, FMode::ClosedForm, "elementary closed form for any valid C"},
        {0.5, IdentityExp{}, FMode::ClosedForm, "elementary closed form for any valid C"},
        {0.5, SqrtExp{}, FMode::ClosedForm, "elementary closed form for any valid C"},
        {0.5, ReciprocalExp{}, FMode::ClosedForm,
         "closed form via the generalized exponential integral E1"},
        {2.0, ReciprocalExp{}, FMode::ClosedForm,
         "closed form via the principal-value exponential integral Ei"},
        {0.5, PowerExp{0.7}, FMode::ClosedForm, "closed form via the upper incomplete gamma function"},
        {2.0, PowerExp{0.3}, FMode::Quadrature, "negative gamma argument; quadrature fallback"},
        {2.0, ExponentSpec{ScheduledExp{{{0.0, 0.1}, {1.0, 1.0}}}}, FMode::Quadrature,
         "scheduled exponent; quadrature fallback"},
    };
    for (const auto& row : rows) {
        const auto form = form_of(row.C, row.spec);
        CHECK(form.f_mode == row.mode);
        CHECK(form.closed_form_valid == (row.mode == FMode::ClosedForm));
        CHECK(form.validity_reason == row.reason);
    }

    AdditiveExp add;
    add.terms.push_back({1.0, SqrtExp{}});
    add.terms.push_back({0.5, IdentityExp{}});
    const auto add_form = form_of(2.0, ExponentSpec{add});
    CHECK(add_form.f_mode == FMode::Quadrature);
    CHECK(add_form.validity_reason == "additive exponent; quadrature fallback");

    CHECK_THROWS_AS(form_of(1.0, IdentityExp{}), DomainError);
    CHECK_THROWS_AS(form_of(2.0, PowerExp{0.0}), DomainError);
}

TEST_CASE("energy cost G", "[functional]") {
    const ControlParams two = validate(2.0);
    const ControlParams half = validate(0.5);

    CHECK(g_cost(two, 0.0) == 0.0);
    CHECK_THAT(g_cost(two, 1.0), WithinRel(-inv_ln2, 1e-15));
    CHECK_THAT(g_cost(two, -1.0), WithinRel(-inv_ln2, 1e-15));
    CHECK_THAT(g_cost(half, 1.0), WithinRel(inv_ln2, 1e-15));

    SECTION("G is even and its derivative is the conjugate g") {
        for (double u : {0.05, 0.3, 1.0, 2.7, 15.0}) {
            CHECK(g_cost(two, u) == g_cost(two, -u));
            const double fd = oracles::central_difference([&](double x) { return g_cost(two, x); }, u);
            CHECK_THAT(conjugate_g(two, u), WithinRel(fd, 1e-8));
        }
    }
    SECTION("for C > 1 the minimum sits at |U| = 1 with value -C1") {
        const double floor = g_cost(two, 1.0);
        for (double u = 0.05; u <= 3.0; u += 0.05)
            CHECK(g_cost(two, u) >= floor - 1e-15);
    }
}

TEST_CASE("closed-form state cost values", "[functional]") {
    SECTION("identity") {
        const auto form = form_of(2.0, IdentityExp{});
        CHECK_THAT(f_state_closed(form, 0.0), WithinRel(inv_ln2, 1e-15));
        CHECK_THAT(f_state_closed(form, 1.0), WithinRel(2.0 * inv_ln2, 1e-15));
        CHECK_THAT(f_state_closed(form, -1.0), WithinRel(2.0 * inv_ln2, 1e-15));
    }
    SECTION("sqrt") {
        const auto form = form_of(2.0, SqrtExp{});
        CHECK_THAT(f_state_closed(form, 1.0), WithinRel(-2.554695760466577562, 1e-14));
        CHECK_THAT(f_state_closed(form, 1.0),
                   WithinRel(2.0 * inv_ln2 * 2.0 * (1.0 - inv_ln2), 1e-14));
    }
    SECTION("reciprocal, both exponential-integral branches") {
        const auto grow = form_of(2.0, ReciprocalExp{});
        CHECK_THAT(f_state_closed(grow, 2.0), WithinRel(2.900078321222318923, 1e-13));
        CHECK_THAT(f_state_closed(grow, 0.5), WithinRel(-0.056973241698035460233, 1e-12));
        CHECK_THROWS_AS(f_state_closed(grow, 0.0), SingularityError);

        const auto decay = form_of(0.5, ReciprocalExp{});
        CHECK_THAT(f_state_closed(decay, 2.0), WithinRel(0.85889173266536239944, 1e-13));
        CHECK(f_state_closed(decay, 0.0) == 0.0);  // removable limit for C < 1
    }
    SECTION("power with fractional base") {
        const auto form = form_of(0.5, PowerExp{0.7});
        CHECK_THAT(f_state_closed(form, 1.3), WithinRel(-1.3202260199847269307, 1e-13));
        CHECK_THAT(f_state_closed(form, 0.0), WithinRel(-2.1368072801707345377, 1e-13));
        CHECK(f_state_closed(form_of(0.5, PowerExp{-0.5}), 0.0) == 0.0);
    }
    SECTION("quadrature-only forms refuse the closed evaluator") {
        CHECK_THROWS_AS(f_state_closed(form_of(2.0, PowerExp{0.3}), 1.0), NotClosedFormError);
        AdditiveExp add;
        add.terms.push_back({1.0, IdentityExp{}});
        CHECK_THROWS_AS(f_state_closed(form_of(2.0, ExponentSpec{add}), 1.0), NotClosedFormError);
    }
}

TEST_CASE("state cost derivative recovers the activation", "[functional]") {
    const std::vector<FunctionalForm> forms = {
        form_of(2.0, IdentityExp{}),      form_of(0.5, IdentityExp{}),
        form_of(2.0, SqrtExp{}),          form_of(0.5, SqrtExp{}),
        form_of(2.0, ReciprocalExp{}),    form_of(0.5, ReciprocalExp{}),
        form_of(0.5, PowerExp{0.7}),      form_of(0.5, PowerExp{1.5}),
        form_of(0.5, PowerExp{-0.5}),
    };
    for (const auto& form : forms) {
        for (double s : {0.4, 1.0, 2.3, -0.8, -1.6}) {
            const double fd =
                oracles::central_difference([&](double x) { return f_state_closed(form, x); }, s);
            const double f = conjugate_f(form.params, form.spec, s);
            CHECK_THAT(fd, WithinRel(f, 1e-7));
        }
    }
}

TEST_CASE("closed forms agree with quadrature of the defining integral", "[functional]") {
    const std::vector<FunctionalForm> forms = {
        form_of(2.0, IdentityExp{}),   form_of(2.0, SqrtExp{}),
        form_of(2.0, ReciprocalExp{}), form_of(0.5, ReciprocalExp{}),
        form_of(0.5, PowerExp{0.7}),
    };
    for (const auto& form : forms) {
        const double ref = default_reference_point(form);
        for (double s : {0.3, 1.0, 2.5, -1.3}) {
            const double closed_delta = f_state_closed(form, s) - f_state_closed(form, ref);
            const double numeric_delta = f_state_numeric(form, s, ref);
            CHECK_THAT(numeric_delta, WithinAbs(closed_delta, 1e-9));
        }
    }
    SECTION("numeric path is even in S and antisymmetric in (S, S_ref)") {
        const auto form = form_of(2.0, PowerExp{0.3});
        CHECK(f_state_numeric(form, -1.7, 0.0) == f_state_numeric(form, 1.7, 0.0));
        CHECK_THAT(f_state_numeric(form, 0.4, 1.9), WithinRel(-f_state_numeric(form, 1.9, 0.4), 1e-13));
        CHECK(f_state_numeric(form, 1.2, 1.2) == 0.0);
        CHECK(f_state_numeric(form, -1.2, 1.2) == 0.0);
    }
}

TEST_CASE("power-law reductions to the named cases", "[functional]") {
    const double C = 0.5;
    const auto identity = form_of(C, IdentityExp{});
    const auto sqrt_form = form_of(C, SqrtExp{});
    const auto reciprocal = form_of(C, ReciprocalExp{});
    const auto p1 = form_of(C, PowerExp{1.0});
    const auto p_half = form_of(C, PowerExp{0.5});
    const auto p_neg1 = form_of(C, PowerExp{-1.0});
    for (double s : {0.3, 0.7, 1.0, 1.7, 2.5}) {
        CHECK_THAT(f_state_closed(p1, s), WithinRel(f_state_closed(identity, s), 1e-10));
        CHECK_THAT(f_state_closed(p_half, s), WithinRel(f_state_closed(sqrt_form, s), 1e-10));
        CHECK_THAT(f_state_closed(p_neg1, s), WithinRel(f_state_closed(reciprocal, s), 1e-10));
    }
}

TEST_CASE("incremental evaluator tracks the direct numeric path", "[functional]") {
    const auto form = form_of(2.0, PowerExp{0.3});
    FStateEvaluator f_of(form);
    const double ref = f_of.reference();
    CHECK(ref == 0.0);
    const std::vector<double> path = {0.2, 0.7, 1.4, 1.1, 1.1, -0.6, 2.2, 0.05};
    for (double s : path)
        CHECK_THAT(f_of(s), WithinAbs(f_state_numeric(form, s, ref), 1e-10));

    SECTION("closed forms pass straight through") {
        const auto id = form_of(2.0, IdentityExp{});
        FStateEvaluator g_of(id);
        CHECK(g_of(1.0) == f_state_closed(id, 1.0));
    }
    SECTION("origin-singular growth forms anchor away from the pole") {
        const auto rec = form_of(2.0, ReciprocalExp{});
        CHECK(default_reference_point(rec) == 1.0);
        AdditiveExp add;
        add.terms.push_back({1.0, ReciprocalExp{}});
        add.terms.push_back({1.0, IdentityExp{}});
        CHECK(default_reference_point(form_of(2.0, ExponentSpec{add})) == 1.0);
        CHECK(default_reference_point(form_of(0.5, ReciprocalExp{})) == 0.0);
    }
}

TEST_CASE("equilibrium baseline", "[functional]") {
    const auto id = form_of(2.0, IdentityExp{});
    CHECK(equilibrium_baseline(id) == f_state_closed(id, 0.0));
    const auto sq = form_of(0.5, SqrtExp{});
    CHECK(equilibrium_baseline(sq) == f_state_closed(sq, 0.0));

    CHECK(equilibrium_baseline(form_of(0.5, ReciprocalExp{})) == 0.0);
    CHECK(equilibrium_baseline(form_of(2.0, PowerExp{0.3})) == 0.0);
    CHECK_THROWS_AS(equilibrium_baseline(form_of(2.0, ReciprocalExp{})), DomainError);

    SECTION("baseline-subtracted integrand vanishes at the equilibrium") {
        CHECK_THAT(integrand(id, 0.0, 0.0, equilibrium_baseline(id)), WithinAbs(0.0, 1e-15));
        CHECK_THAT(integrand(id, 0.0, 0.0), WithinRel(inv_ln2, 1e-15));
    }
}

TEST_CASE("trajectory cost accumulation", "[functional]") {
    const auto form = form_of(2.0, IdentityExp{});
    const double base = equilibrium_baseline(form);

    SECTION("constant samples reproduce horizon * integrand") {
        Trajectory traj;
        const int n = 11;
        for (int i = 0; i < n; ++i) {
            traj.times.push_back(0.1 * i);
            traj.s_values.push_back(1.0);
            traj.u_values.push_back(1.0);
        }
        const auto j = j_along_trajectory(form, traj, base);
        CHECK_THAT(j.j_state, WithinRel(f_state_closed(form, 1.0) - base, 1e-13));
        CHECK_THAT(j.j_energy, WithinRel(g_cost(form.params, 1.0), 1e-13));
        CHECK_THAT(j.j_total, WithinAbs(j.j_state + j.j_energy, 1e-12));
        CHECK_THAT(j.horizon, WithinRel(1.0, 1e-13));
    }
    SECTION("trapezoid converges on a smooth ramp") {
        // S(t) = t on [0, 1]: integral of F is C1 * (2 - 1)/ln 2 = C1^2 (no baseline).
        Trajectory traj;
        const int n = 2001;
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            traj.times.push_back(t);
            traj.s_values.push_back(t);
            traj.u_values.push_back(0.0);
        }
        const auto j = j_along_trajectory(form, traj);
        CHECK_THAT(j.j_state, WithinRel(inv_ln2 * inv_ln2, 1e-6));
        CHECK(j.j_energy == 0.0);
    }
    SECTION("degenerate trajectories cost nothing") {
        const auto j = j_along_trajectory(form, Trajectory{});
        CHECK(j.j_total == 0.0);
        CHECK(j.horizon == 0.0);
    }
}

TEST_CASE("form descriptions", "[functional]") {
    const auto id = describe_form(form_of(2.0, IdentityExp{}));
    CHECK(id.case_name == "identity");
    CHECK(id.f_text == "C1*C^|S|");
    CHECK(id.g_text == "C1*|U|*ln|U| - C1*|U|");
    CHECK(id.closed_form_valid);
    CHECK(id.special_functions_used.empty());

    const auto rec_grow = describe_form(form_of(2.0, ReciprocalExp{}));
    CHECK(rec_grow.f_text == "|S|*C^(1/|S|) - ln(C)*Ei(ln(C)/|S|)");
    REQUIRE(rec_grow.special_functions_used.size() == 1);
    CHECK(rec_grow.special_functions_used[0] == "Ei (principal value)");

    const auto rec_decay = describe_form(form_of(0.5, ReciprocalExp{}));
    CHECK(rec_decay.special_functions_used[0] == "E1 (generalized exponential integral)");

    const auto pow_decay = describe_form(form_of(0.5, PowerExp{0.7}));
    CHECK(pow_decay.special_functions_used[0] == "Gamma (upper incomplete)");
    CHECK(pow_decay.closed_form_valid);

    const auto pow_grow = describe_form(form_of(2.0, PowerExp{0.3}));
    CHECK_FALSE(pow_grow.closed_form_valid);
    CHECK(pow_grow.validity_reason == "negative gamma argument; quadrature fallback");
    CHECK(pow_grow.f_text == "numeric quadrature of C^(|S|^alpha)");

    AdditiveExp add;
    add.terms.push_back({1.0, SqrtExp{}});
    add.terms.push_back({0.5, IdentityExp{}});
    const auto mixed = describe_form(form_of(2.0, ExponentSpec{add}));
    CHECK(mixed.case_name == "additive");
    REQUIRE_FALSE(mixed.special_functions_used.empty());
    CHECK(mixed.special_functions_used[0] == "erf (not implemented in closed form)");

    const auto sched = describe_form(form_of(2.0, ExponentSpec{ScheduledExp{{{0.0, 0.1}, {1.0, 1.0}}}}));
    CHECK(sched.case_name == "scheduled");
    CHECK(sched.f_text == "numeric quadrature of C^(|S|^alpha(|S|))");
}
