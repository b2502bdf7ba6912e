#pragma once

#include <cstdint>
#include <vector>

#include "latcap/domain.hpp"

namespace latcap {

// Canonical representative of the hyperoctahedral orbit of x:
// absolute values sorted in decreasing order.
Point canonical_point(const Point& x, int d);

// Orbit tables for a domain invariant under coordinate permutations and sign
// flips. Symmetric functions on the domain (survival vectors, principal
// eigenvectors, equilibrium weights of centered balls) live on orbit
// representatives, which shrinks solver state by up to 2^d * d!.
class OrbitIndex {
public:
    static OrbitIndex build(const DomainInstance& domain);

    std::size_t orbit_count() const { return reps_.size(); }
    const Point& rep(std::int32_t o) const { return reps_[std::size_t(o)]; }
    std::int64_t orbit_size(std::int32_t o) const { return sizes_[std::size_t(o)]; }
    std::int64_t domain_size() const { return total_; }
    int dim() const { return dim_; }

    // -1 when x is outside the domain.
    std::int32_t orbit_of(const Point& x) const { return rep_map_.find(canonical_point(x, dim_)); }

    // Orbit id of rep(o) +/- e_i in the fixed neighbor order; -1 if outside.
    const std::int32_t* neighbor_orbits(std::int32_t o) const {
        return nbr_.data() + std::size_t(o) * std::size_t(2 * dim_);
    }

    bool rep_is_boundary(std::int32_t o) const { return boundary_flag_[std::size_t(o)] != 0; }

    // All members of orbit o.
    std::vector<Point> expand(std::int32_t o) const;

    // y[i] = f(orbit containing point i) for a full-domain vector.
    void scatter(const DomainInstance& domain, const std::vector<double>& orbit_values,
                 std::vector<double>& out) const;

private:
    int dim_ = 3;
    std::int64_t total_ = 0;
    std::vector<Point> reps_;
    std::vector<std::int64_t> sizes_;
    std::vector<std::int32_t> nbr_;
    std::vector<std::uint8_t> boundary_flag_;
    PointMap rep_map_;
};

}  // namespace latcap
