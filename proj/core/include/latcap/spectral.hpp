#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/equilibrium.hpp"
#include "latcap/green.hpp"

namespace latcap {

// Principal eigencouple of the killed kernel P_A, l1-normalized:
// P_A phi = lambda phi, sum phi = 1, phi >= 0.
struct EigenPair {
    DomainPtr domain;
    double lambda = 0.0;
    std::vector<double> phi;  // per domain index
    double residual = 0.0;
    std::optional<double> lambda2;
    double phi_sq_sum = 0.0;  // sum phi^2, compensated
};

// Power iteration on (I + P_A)/2 (keeps the Perron branch dominant on
// bipartite-ish kernels) with l1 renormalization each step; symmetric domains
// iterate on orbit representatives. Deterministic for a fixed schedule.
EigenPair principal_eigenpair(DomainPtr domain, double tol = 1e-12,
                              std::uint64_t iter_cap = 1000000);

// Second (real-ordered) eigenvalue. Symmetric domains use the odd-sector
// reduction (the subdominant mode is odd in one axis); general domains run a
// deflated iteration against the principal vector.
double second_eigenvalue(const EigenPair& principal, double tol = 1e-12,
                         std::uint64_t iter_cap = 1000000);

// lambda^T phi(x) / sum phi^2: the long-horizon surrogate of P_x(R_T ⊆ A).
double survival_spectral(const EigenPair& pair, const Point& x, std::uint64_t T);
double survival_spectral_log(const EigenPair& pair, const Point& x, std::uint64_t T);

// Connected component of domain minus obstacle containing root (BFS on
// nearest-neighbor edges).
DomainInstance component_around(const DomainInstance& domain, const std::vector<Point>& obstacle,
                                const Point& root);

struct SpectralGap {
    double base_lambda = 0.0;
    double obstructed_lambda = 0.0;
    double gap = 0.0;
    double obstacle_capacity = 0.0;
    std::size_t component_size = 0;
};

// Eigenvalue cost of carving an obstacle out of a ball: both eigenvalues plus
// the obstacle capacity (exact solver).
SpectralGap obstacle_gap(DomainPtr ball, const std::vector<Point>& obstacle,
                         const GreenTable& table, double tol = 1e-12);

}  // namespace latcap
