#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "expact/oracles.hpp"
#include "expact/specfun.hpp"

using namespace expact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values frozen from 50-digit evaluations of the defining
// integrals/series with an independent arbitrary-precision tool.

TEST_CASE("generalized exponential integral E_a(z)", "[specfun]") {
    SECTION("order zero reduces to e^-z / z") {
        CHECK_THAT(en_general(0.0, 2.0), WithinRel(std::exp(-2.0) / 2.0, 1e-15));
        CHECK_THAT(en_general(0.0, 0.1), WithinRel(9.0483741803595951791, 1e-14));
        CHECK_THAT(en_general(0.0, 5.0), WithinRel(0.0013475893998170934193, 1e-14));
    }
    SECTION("integer order, series and continued-fraction branches") {
        CHECK_THAT(en_general(1.0, 0.1), WithinRel(1.8229239584193906159, 1e-13));
        CHECK_THAT(en_general(1.0, 1.0), WithinRel(0.21938393439552027368, 1e-13));
        CHECK_THAT(en_general(1.0, 5.0), WithinRel(0.0011482955912753257973, 1e-13));
        CHECK_THAT(en_general(2.0, 0.1), WithinRel(0.72254502219402050656, 1e-13));
        CHECK_THAT(en_general(2.0, 1.0), WithinRel(0.14849550677592204792, 1e-13));
        CHECK_THAT(en_general(2.0, 5.0), WithinRel(0.00099646904270883810998, 1e-13));
    }
    SECTION("fractional order") {
        CHECK_THAT(en_general(0.5, 0.1), WithinRel(3.6697045911267448852, 1e-13));
        CHECK_THAT(en_general(0.5, 1.0), WithinRel(0.2788055852806619765, 1e-13));
        CHECK_THAT(en_general(0.5, 5.0), WithinRel(0.0012408403001751185682, 1e-13));
    }
    SECTION("domain") {
        CHECK_THROWS_AS(en_general(1.0, 0.0), DomainError);
        CHECK_THROWS_AS(en_general(1.0, -1.0), DomainError);
        CHECK_THROWS_AS(en_general(-0.5, 1.0), DomainError);
    }
    SECTION("strictly decreasing in z") {
        for (double a : {0.0, 0.5, 1.0, 2.0}) {
            double prev = en_general(a, 0.05);
            for (double z : {0.1, 0.3, 1.0, 2.0, 4.0, 8.0}) {
                const double cur = en_general(a, z);
                CHECK(cur < prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("principal-value exponential integral Ei(x)", "[specfun]") {
    CHECK_THAT(ei_principal(1.0), WithinRel(1.8951178163559367555, 1e-13));
    CHECK_THAT(ei_principal(0.01), WithinRel(-4.0179294654266693868, 1e-13));
    CHECK_THROWS_AS(ei_principal(0.0), DomainError);
    CHECK_THROWS_AS(ei_principal(-1.0), DomainError);
}

TEST_CASE("upper incomplete gamma", "[specfun]") {
    SECTION("elementary special cases") {
        CHECK_THAT(gamma_upper(1.0, 0.7), WithinRel(std::exp(-0.7), 1e-14));
        CHECK_THAT(gamma_upper(3.0, 0.0), WithinRel(2.0, 1e-14));
        CHECK_THAT(gamma_upper(2.0, 1.0), WithinRel(2.0 * std::exp(-1.0), 1e-14));
    }
    SECTION("zero and negative order via E1 and downward recurrence") {
        CHECK_THAT(gamma_upper(0.0, 1.0), WithinRel(0.21938393439552027368, 1e-13));
        CHECK_THAT(gamma_upper(-1.0, 0.5), WithinRel(0.65328772464910603546, 1e-13));
        CHECK_THAT(gamma_upper(-0.5, 1.0), WithinRel(0.17814771178156069019, 1e-13));
    }
    SECTION("fractional positive order, both branches") {
        CHECK_THAT(gamma_upper(0.5, 1.0), WithinRel(0.2788055852806619765, 1e-13));
        CHECK_THAT(gamma_upper(3.5, 2.0), WithinRel(2.5914740071910742312, 1e-13));
    }
    SECTION("domain") {
        CHECK_THROWS_AS(gamma_upper(0.0, 0.0), DomainError);
        CHECK_THROWS_AS(gamma_upper(-1.0, 0.0), DomainError);
        CHECK_THROWS_AS(gamma_upper(0.5, -1.0), DomainError);
    }
    SECTION("strictly decreasing in x") {
        for (double s : {-0.5, 0.5, 2.0}) {
            double prev = gamma_upper(s, 0.05);
            for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                const double cur = gamma_upper(s, x);
                CHECK(cur < prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("error function", "[specfun]") {
    CHECK(expact::erf(0.0) == 0.0);
    CHECK_THAT(expact::erf(1.0), WithinRel(0.84270079294971486934, 1e-13));
    CHECK_THAT(expact::erf(6.0), WithinAbs(1.0, 1e-12));
    SECTION("odd by construction") {
        for (double x : {0.1, 0.7, 1.3, 2.5, 4.0})
            CHECK(expact::erf(-x) == -expact::erf(x));
    }
}

TEST_CASE("transformation identity between E_a and the incomplete gamma", "[specfun]") {
    for (double a : {0.0, 0.5, 1.0, 2.0})
        for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double lhs = en_general(a, z);
            const double rhs = std::pow(z, a - 1.0) * gamma_upper(1.0 - a, z);
            CHECK_THAT(lhs, WithinRel(rhs, 1e-9));
        }
}

TEST_CASE("gamma recurrence", "[specfun]") {
    for (double s : {0.5, 1.0, 2.0})
        for (double x : {0.5, 1.0, 2.0, 5.0, 10.0})
            CHECK_THAT(gamma_upper(s + 1.0, x),
                       WithinRel(s * gamma_upper(s, x) + std::pow(x, s) * std::exp(-x), 1e-9));
}

TEST_CASE("defining-integral oracles agree with the implementations", "[specfun][oracle]") {
    SECTION("E_a") {
        for (double a : {0.0, 0.5, 1.0, 2.0})
            for (double z : {0.1, 1.0, 5.0})
                CHECK_THAT(en_general(a, z),
                           WithinRel(oracles::en_defining_integral(a, z), 1e-9));
    }
    SECTION("Ei") {
        for (double x : {0.01, 0.5, 1.0, 5.0})
            CHECK_THAT(ei_principal(x), WithinRel(oracles::ei_defining_integral(x), 1e-9));
    }
    SECTION("gamma") {
        for (double s : {-1.5, -0.5, 0.5, 2.0, 3.5})
            for (double x : {0.1, 1.0, 5.0})
                CHECK_THAT(gamma_upper(s, x),
                           WithinRel(oracles::gamma_upper_defining_integral(s, x), 1e-9));
    }
    SECTION("erf") {
        for (double x : {0.1, 1.0, 3.0})
            CHECK_THAT(expact::erf(x), WithinRel(oracles::erf_defining_integral(x), 1e-9));
    }
}
