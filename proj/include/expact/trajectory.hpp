#pragma once

#include <optional>
#include <vector>

namespace expact {

/// Uniformly sampled closed-loop run: surface S(t) and control U(t) on a
/// constant-step time grid. If the run arrived at the surface (|S| below the
/// dead zone, or a detected sign crossing), reached_origin_at holds the
/// refined arrival time and all later samples are zero.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> s_values;
    std::vector<double> u_values;
    std::optional<double> reached_origin_at;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }
};

}  // namespace expact
