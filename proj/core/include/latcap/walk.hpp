#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/equilibrium.hpp"
#include "latcap/green.hpp"
#include "latcap/rng.hpp"

namespace latcap {

// Visited-point set left by a walk, restricted to a window when one is set.
struct Trace {
    DomainPtr window;            // null = unbounded
    std::vector<Point> visited;  // sorted, deduplicated
    std::uint64_t steps_used = 0;
    Point start{};

    bool contains(const Point& p) const {
        return std::binary_search(visited.begin(), visited.end(), p);
    }
};

// Exact n-step SRW range; records every visited point (window ones when a
// window is given).
Trace srw_range(const Point& start, std::uint64_t n, DomainPtr window, int d, RngStream& rng);

struct TeleportConfig {
    double r_out_factor = 5.0;  // trigger distance in window diameters
    std::uint64_t step_cap = 100000000;
};

// Samples R_infty ∩ window: SRW recording window visits; excursions reaching
// the far trigger are resolved by the last-exit identity — with probability
// sum_y g(z-y) e(y) the walk re-enters at y drawn proportionally to
// g(z-y) e(y), otherwise it never returns. Far segments move by exact
// ball-exit jumps. Bias is bounded by the far-field Green error at the
// trigger radius.
Trace range_in_window(const Point& start, DomainPtr window, const EquilibriumProfile& profile,
                      const GreenTable& table, const TeleportConfig& cfg, RngStream& rng);

}  // namespace latcap
