#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "latcap/equilibrium.hpp"
#include "latcap/walk.hpp"

namespace latcap {

// Trace of the random interlacement at level u inside a finite window.
struct InterlacementSample {
    double u = 0;
    DomainPtr window;
    std::vector<Point> trace;  // sorted
    std::uint64_t trajectory_count = 0;
};

struct BernoulliField {
    double p = 0;
    DomainPtr window;
    std::vector<Point> occupied;  // sorted (window index order)
};

struct InterlaceConfig {
    TeleportConfig teleport;
    // Also run the backward half of each trajectory (the walk conditioned to
    // never return to the window). It provably contributes no window visits;
    // enabling it exercises that structural fact.
    bool simulate_backward = false;
};

// Window trace of I(u): trajectory_count ~ Poisson(u cap(window)); each
// trajectory enters at x ~ harmonic measure and contributes the window visits
// of a forward SRW (sampled exactly via the teleport-truncated walk). The
// backward halves never revisit the window past the entry point, so the trace
// law needs only the forward parts.
InterlacementSample sample_interlacement(double u, DomainPtr window,
                                         const EquilibriumProfile& profile,
                                         const HarmonicSampler& entry, const GreenTable& table,
                                         const InterlaceConfig& cfg, RngStream& rng);

// Monte Carlo estimate of P(I(u) ∩ K = empty) with K inside the window.
McEstimate vacancy_probability_mc(double u, const DomainInstance& K, DomainPtr window,
                                  const EquilibriumProfile& profile, const HarmonicSampler& entry,
                                  const GreenTable& table, std::uint64_t replicas,
                                  std::uint64_t master_seed, std::uint64_t grid_index,
                                  const InterlaceConfig& cfg = {});

// Each window point occupied independently with probability p.
BernoulliField sample_bernoulli_field(double p, DomainPtr window, RngStream& rng);

// Monotone coupling across intensities: one Poisson soup at the top level,
// trajectories tagged with uniform marks; the trace at level u keeps marks
// <= u, so traces are nested along the grid.
class CoupledInterlacement {
public:
    CoupledInterlacement(double u_max, DomainPtr window, const EquilibriumProfile& profile,
                         const HarmonicSampler& entry, const GreenTable& table,
                         const InterlaceConfig& cfg, RngStream& rng);

    // Sorted trace at level u <= u_max.
    std::vector<Point> trace_at(double u) const;
    std::uint64_t trajectory_count_at(double u) const;

private:
    double u_max_;
    DomainPtr window_;
    std::vector<double> marks_;                  // per trajectory
    std::vector<std::vector<Point>> visits_;     // per trajectory, sorted
};

// Backward-half validation walk: from the entry point, steps tilted by
// h(z) = P_z(H_window = infty) until the far trigger. Returns the number of
// steps taken; throws if the walk ever re-enters the window.
std::uint64_t backward_escape_walk(const Point& entry, const DomainInstance& window,
                                   const EquilibriumProfile& profile, const GreenTable& table,
                                   const TeleportConfig& cfg, RngStream& rng);

}  // namespace latcap
