// Compares simulated arrival times with the analytic predictions: the power
// family reaches the surface in S0^(1-a)/(1-a) for a < 1, and the elementary
// exponential law in (1 - C^-S0)/ln C. The runs agree to within the
// integration step, except that the slow tail of a high-exponent power law
// is cut short where |S| enters the arrival dead zone.

#include <cstdio>

#include "expact/expact.hpp"

int main() {
    using namespace expact;

    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 4.0;
    cfg.x0 = {1.0};
    const PlantModel plant = ScalarIntegrator{};

    std::printf("power family U = -|S|^a sign(S), from S0 = 1:\n");
    std::printf("  %6s  %12s  %12s\n", "a", "analytic", "simulated");
    for (const double a : {0.0, 0.25, 0.5, 0.75}) {
        const PowerLawParams law = validate(PowerLawParams{a});
        const ReachTime analytic = analytic_reach_time(law, cfg.x0[0]);
        const Trajectory traj = simulate_closed_loop(
            plant, [&law](double s) { return power_control(law, s); }, cfg);
        std::printf("  %6.2f  %12.6f  %12.6f\n", a, analytic.value,
                    traj.reached_origin_at.value_or(-1.0));
    }

    std::printf("\nelementary exponential law U = -C^|S| sign(S), from S0 = 1:\n");
    std::printf("  %6s  %12s  %12s\n", "C", "analytic", "simulated");
    for (const double base : {1.5, 2.0, 4.0, 8.0}) {
        const ControlParams params = validate(base);
        const ReachTime analytic = analytic_reach_time(params, IdentityExp{}, cfg.x0[0]);
        const Trajectory traj = simulate_closed_loop(
            plant, [&params](double s) { return control_u(params, IdentityExp{}, s); }, cfg);
        std::printf("  %6.2f  %12.6f  %12.6f\n", base, analytic.value,
                    traj.reached_origin_at.value_or(-1.0));
    }
    return 0;
}
