#include "latcap/symmetry.hpp"

#include <algorithm>

#include "latcap/errors.hpp"

namespace latcap {

Point canonical_point(const Point& x, int d) {
    Point c{};
    for (int i = 0; i < d; ++i) c[i] = x[i] < 0 ? -x[i] : x[i];
    std::sort(c.c.begin(), c.c.begin() + d, std::greater<std::int32_t>());
    return c;
}

OrbitIndex OrbitIndex::build(const DomainInstance& domain) {
    if (!domain.is_symmetric())
        throw NumericError("orbit reduction requires a symmetric (centered) domain");
    OrbitIndex oi;
    oi.dim_ = domain.dim();
    oi.total_ = std::int64_t(domain.size());

    const int d = oi.dim_;
    for (const Point& p : domain.points()) {
        Point c = canonical_point(p, d);
        if (c == p) oi.reps_.push_back(p);
    }
    std::sort(oi.reps_.begin(), oi.reps_.end());
    oi.rep_map_.reserve(oi.reps_.size());
    for (std::size_t i = 0; i < oi.reps_.size(); ++i) oi.rep_map_.insert(oi.reps_[i], std::int32_t(i));

    oi.sizes_.resize(oi.reps_.size());
    oi.boundary_flag_.assign(oi.reps_.size(), 0);
    oi.nbr_.assign(oi.reps_.size() * std::size_t(2 * d), -1);
    std::array<Point, 2 * kMaxDim> nbr;
    for (std::size_t o = 0; o < oi.reps_.size(); ++o) {
        oi.sizes_[o] = std::int64_t(oi.expand(std::int32_t(o)).size());
        const Point& rep = oi.reps_[o];
        std::int32_t idx = domain.index_of(rep);
        oi.boundary_flag_[o] = domain.is_inner_boundary(idx) ? 1 : 0;
        neighbors(rep, d, nbr);
        for (int k = 0; k < 2 * d; ++k) {
            const Point& q = nbr[std::size_t(k)];
            oi.nbr_[o * std::size_t(2 * d) + std::size_t(k)] =
                domain.contains(q) ? oi.rep_map_.find(canonical_point(q, d)) : -1;
        }
    }

    std::int64_t check = 0;
    for (std::int64_t s : oi.sizes_) check += s;
    LATCAP_REQUIRE(check == oi.total_, "orbit sizes must partition the domain");
    return oi;
}

std::vector<Point> OrbitIndex::expand(std::int32_t o) const {
    const int d = dim_;
    const Point& rep = reps_[std::size_t(o)];
    // distinct permutations via next_permutation on the ascending sort,
    // then sign choices on nonzero entries: members are generated uniquely.
    Point asc = rep;
    std::sort(asc.c.begin(), asc.c.begin() + d);
    std::vector<Point> out;
    Point perm = asc;
    do {
        int nz = 0;
        std::array<int, kMaxDim> nz_pos{};
        for (int i = 0; i < d; ++i)
            if (perm[i] != 0) nz_pos[std::size_t(nz++)] = i;
        for (int mask = 0; mask < (1 << nz); ++mask) {
            Point m = perm;
            for (int b = 0; b < nz; ++b)
                if (mask & (1 << b)) m[nz_pos[std::size_t(b)]] = -m[nz_pos[std::size_t(b)]];
            out.push_back(m);
        }
    } while (std::next_permutation(perm.c.begin(), perm.c.begin() + d));
    return out;
}

void OrbitIndex::scatter(const DomainInstance& domain, const std::vector<double>& orbit_values,
                         std::vector<double>& out) const {
    out.resize(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
        std::int32_t o = rep_map_.find(canonical_point(domain.point(std::int32_t(i)), dim_));
        out[i] = orbit_values[std::size_t(o)];
    }
}

}  // namespace latcap
