// Shows the energy-cost landscape G and the conjugate pair it comes from:
// the running cost assigns zero to an idle actuator, is stationary with
// value -C1 at |U| = 1 (a minimum when C > 1), and grows superlinearly
// beyond — and composing the inverse law g with the control law f returns
// the surface value exactly.

#include <cstdio>

#include "expact/expact.hpp"

int main() {
    using namespace expact;

    for (const double base : {2.0, 0.5}) {
        const ControlParams params = validate(base);
        std::printf("base C = %g  (C1 = %.15g)\n", params.C, params.C1);
        std::printf("  %8s  %12s\n", "U", "G(U)");
        for (const double u : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
            std::printf("  %8.2f  %12.6f\n", u, g_cost(params, u));
        }
        std::printf("  stationary value -C1 = %.6f at |U| = 1 (%s)\n\n", -params.C1,
                    params.C > 1.0 ? "minimum" : "maximum");
    }

    const ControlParams params = validate(2.0);
    std::printf("conjugacy round-trip g(f(S)) = S for the elementary law:\n");
    for (const double s : {-2.0, -0.5, 0.75, 3.0}) {
        const double u = conjugate_f(params, IdentityExp{}, s);
        std::printf("  S = %6.2f  ->  U = f(S) = %12.6f  ->  g(U) = %12.6f\n", s, u,
                    conjugate_g(params, u));
    }
    return 0;
}
