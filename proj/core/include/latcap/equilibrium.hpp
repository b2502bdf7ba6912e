#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/green.hpp"
#include "latcap/rng.hpp"

namespace latcap {

struct SolverConfig {
    std::size_t dense_max = 4000;      // dense factorization cap on boundary size
    double tol = 1e-8;                 // max residual of sum_y g(x,y) e(y) = 1 on K
    int cg_max_iter = 20000;
    std::size_t residual_sample = 2048;  // interior spot checks on large domains
};

// Equilibrium measure e_K (escape probabilities on the inner boundary),
// capacity cap(K) = sum e, and the harmonic measure ebar = e / cap.
struct EquilibriumProfile {
    DomainPtr support;
    std::vector<double> e;     // per domain index; exactly 0 off the inner boundary
    std::vector<double> ebar;  // e / cap
    double cap = 0.0;
    double residual = 0.0;
};

// Solves sum_{y in K} g(x-y) e(y) = 1 for x in K. The solution is supported on
// the inner boundary, so the system is reduced there; centered symmetric
// domains additionally collapse onto orbit representatives.
EquilibriumProfile equilibrium_measure(DomainPtr K, const GreenTable& table,
                                       const SolverConfig& cfg = {});

// P_z(H_K < infty) = sum_y g(z-y) e(y) for z outside K.
// Throws NumericError when the sum exceeds 1 + 1e-6; clamps smaller excesses.
double hitting_probability_far(const EquilibriumProfile& profile, const Point& z,
                               const GreenTable& table);

// P_x(H_K = infty) with H the first return time (>= 1); exact one-step
// decomposition on top of the last-exit identity. Valid for any x.
double escape_probability(const EquilibriumProfile& profile, const Point& x,
                          const GreenTable& table);

// Alias-table sampler for ebar. Immutable after construction.
class HarmonicSampler {
public:
    explicit HarmonicSampler(const EquilibriumProfile& profile);
    const Point& sample(RngStream& rng) const;

private:
    std::vector<Point> pts_;
    std::vector<double> prob_;
    std::vector<std::int32_t> alias_;
};

struct CapacityMcConfig {
    double radius = 0.0;         // stop radius; 0 = radius_factor * diameter
    double radius_factor = 5.0;  // must keep radius >= 2 * diameter
    int replicas = 8;
    int walks_per_point = 1;
    std::size_t point_sample_max = 0;  // 0 = every boundary point per replica
    std::uint64_t step_cap = 100000000;
    std::uint64_t grid_index = 0;  // stream labelling
};

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t replicas = 0;
};

// Monte Carlo capacity: escape runs from the inner boundary, stopped at the
// far radius, with the self-consistent tail correction
// cap <- S_R / (1 + cap * gbar_R). Residual bias O((diam/R)^{2(d-2)}).
McEstimate capacity_mc(const DomainInstance& K, const GreenTable& table,
                       const CapacityMcConfig& cfg, std::uint64_t master_seed);

}  // namespace latcap
