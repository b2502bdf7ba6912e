#pragma once

#include <cstdint>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/flatmap.hpp"

namespace latcap {

// Nearest-neighbor adjacency as index lists; -1 marks an outside neighbor.
// Shared by the killed-kernel solvers and the spectral power iterations.
struct Adjacency {
    int dim = 3;
    std::vector<std::int32_t> nbr;  // size 2d per point
    static Adjacency build(const DomainInstance& domain);
    const std::int32_t* row(std::int32_t i) const {
        return nbr.data() + std::size_t(i) * std::size_t(2 * dim);
    }
};

// y = P_A x (killed transition kernel applied to a domain vector).
void apply_killed_kernel(const Adjacency& adj, const std::vector<double>& x,
                         std::vector<double>& y);

// Green function of the walk absorbed outside the domain, one source column:
// (I - P_A) G = delta_source. Symmetric and bounded by the free g.
struct KilledGreenField {
    DomainPtr domain;
    Point source;
    std::vector<double> values;  // per domain index
};

KilledGreenField killed_green(DomainPtr domain, const Point& source, double tol = 1e-12,
                              int max_iter = 200000);

// Exact law of the first exit site (the first point visited outside the
// domain), from the source's expected-occupation field.
struct ExitDistribution {
    std::vector<Point> sites;    // sorted
    std::vector<double> prob;
};

ExitDistribution exit_distribution(const DomainInstance& domain, const Point& start,
                                   double tol = 1e-12);

// P_x(hit target before exiting outer) for every x in outer, exact harmonic
// solve with absorbing set target (value 1) and the outer complement (0).
std::vector<double> hit_probability_field(const DomainInstance& outer,
                                          const std::vector<Point>& target, double tol = 1e-12);

double hit_probability_before_exit(const DomainInstance& outer, const std::vector<Point>& target,
                                   const Point& start, double tol = 1e-12);

}  // namespace latcap
