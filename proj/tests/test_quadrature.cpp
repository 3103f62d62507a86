#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "expact/quadrature.hpp"

using namespace expact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("polynomials integrate exactly", "[quadrature]") {
    CHECK_THAT(quad_adaptive([](double t) { return t * t; }, 0.0, 1.0),
               WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(quad_adaptive([](double t) { return 3.0 * t * t - 2.0 * t + 7.0; }, -2.0, 5.0),
               WithinRel(133.0 - 21.0 + 49.0, 1e-14));
}

TEST_CASE("infinite upper limit through the documented variable change", "[quadrature]") {
    CHECK_THAT(quad_adaptive([](double t) { return std::exp(-t); }, 0.0, inf),
               WithinRel(1.0, 1e-12));
    // Shifted lower bound: integral of e^-t over [3, inf) = e^-3.
    CHECK_THAT(quad_adaptive([](double t) { return std::exp(-t); }, 3.0, inf),
               WithinRel(std::exp(-3.0), 1e-12));
    // Gaussian tail: integral of e^(-t^2) over [0, inf) = sqrt(pi)/2.
    CHECK_THAT(quad_adaptive([](double t) { return std::exp(-t * t); }, 0.0, inf),
               WithinRel(std::sqrt(std::acos(-1.0)) / 2.0, 1e-12));
}

TEST_CASE("oscillatory and endpoint-singular integrands converge", "[quadrature]") {
    // integral of sin(40 t) over [0, pi] = (1 - cos(40 pi))/40 = 0. The exact
    // value is 0, so the relative branch of the stop rule is inert and the
    // absolute tolerance must sit above the estimator's roundoff floor
    // (~50 eps integral |f|).
    AccuracyPolicy zero_mean;
    zero_mean.abs_tol = 1e-10;
    CHECK_THAT(quad_adaptive([](double t) { return std::sin(40.0 * t); }, 0.0, std::acos(-1.0),
                             zero_mean),
               WithinAbs(0.0, 1e-12));
    // Integrable inverse-sqrt singularity at the lower endpoint.
    CHECK_THAT(quad_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0),
               WithinRel(2.0, 1e-9));
}

TEST_CASE("accuracy policy is validated", "[quadrature]") {
    AccuracyPolicy bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(quad_adaptive([](double t) { return t; }, 0.0, 1.0, bad), DomainError);
    bad = AccuracyPolicy{};
    bad.abs_tol = -1.0;
    CHECK_THROWS_AS(quad_adaptive([](double t) { return t; }, 0.0, 1.0, bad), DomainError);
    bad = AccuracyPolicy{};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(quad_adaptive([](double t) { return t; }, 0.0, 1.0, bad), DomainError);
}

TEST_CASE("non-convergence carries the last estimate", "[quadrature]") {
    AccuracyPolicy tight;
    tight.rel_tol = 1e-15;
    tight.abs_tol = 1e-305;
    tight.max_subdivisions = 4;  // far too few panels for the oscillation below
    bool threw = false;
    try {
        quad_adaptive([](double t) { return std::sin(500.0 * t * t); }, 0.0, 10.0, tight);
    } catch (const ConvergenceError& e) {
        threw = true;
        CHECK(std::isfinite(e.last_estimate()));
    }
    CHECK(threw);
}

TEST_CASE("divergent integrand is rejected rather than returned", "[quadrature]") {
    // 1/t over (0, 1] diverges: the engine must refuse, not fabricate a value.
    CHECK_THROWS_AS(quad_adaptive([](double t) { return 1.0 / t; }, 0.0, 1.0), ConvergenceError);
}

TEST_CASE("interval orientation and degenerate interval", "[quadrature]") {
    CHECK_THROWS_AS(quad_adaptive([](double t) { return t; }, 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(quad_adaptive([](double t) { return t; }, 3.0, 1.0), DomainError);
}
