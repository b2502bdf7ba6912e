#include "latcap/hopper.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "latcap/alias.hpp"
#include "latcap/domain.hpp"
#include "latcap/errors.hpp"
#include "latcap/linsolve.hpp"
#include "latcap/symmetry.hpp"

namespace latcap {

namespace {

// Largest cached hop radius per dimension; the occupation solves stay under
// ~1.5M lattice points.
const std::vector<int>& radii_for(int d) {
    static const std::vector<int> r3{4, 8, 16, 32, 48};
    static const std::vector<int> r4{4, 8, 16};
    static const std::vector<int> r5{4, 8, 12};
    static const std::vector<int> r6{4, 8};
    static const std::vector<int> r7{4, 6};
    static const std::vector<int> r8{4, 5};
    switch (d) {
        case 3: return r3;
        case 4: return r4;
        case 5: return r5;
        case 6: return r6;
        case 7: return r7;
        default: return r8;
    }
}

}  // namespace

BallExitLaw::BallExitLaw(int d, int r) : d_(d), r_(r) {
    DomainInstance ball = blow_up(ShapeSpec::ball_shape(d), r);
    OrbitIndex orbits = OrbitIndex::build(ball);
    const std::size_t n = orbits.orbit_count();

    // occupation field from the center: (I - P) nu = delta_0, orbit-reduced
    std::vector<double> b(n, 0.0), weight(n);
    b[std::size_t(orbits.orbit_of(Point{}))] = 1.0;
    for (std::size_t o = 0; o < n; ++o) weight[o] = double(orbits.orbit_size(std::int32_t(o)));
    const int two_d = 2 * d;
    const double inv = 1.0 / double(two_d);
    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        y.resize(n);
        for (std::size_t o = 0; o < n; ++o) {
            const std::int32_t* row = orbits.neighbor_orbits(std::int32_t(o));
            double s = 0;
            for (int k = 0; k < two_d; ++k)
                if (row[k] >= 0) s += x[std::size_t(row[k])];
            y[o] = x[o] - s * inv;
        }
    };
    std::vector<double> nu;
    CgResult res = conjugate_gradient(matvec, b, nu, 1e-13, 100000, &weight);
    if (!res.converged) throw NumericError("ball exit law: CG stalled");

    // exit sites: outside neighbors of boundary points, mass nu(y)/2d per edge
    PointMap site_ix;
    std::vector<double> mass;
    std::array<Point, 2 * kMaxDim> nb;
    for (std::int32_t bi : ball.inner_boundary()) {
        const Point& y = ball.point(bi);
        const double ny = nu[std::size_t(orbits.orbit_of(y))] * inv;
        neighbors(y, d, nb);
        for (int k = 0; k < two_d; ++k) {
            const Point& z = nb[std::size_t(k)];
            if (ball.contains(z)) continue;
            std::int32_t s = site_ix.find(z);
            if (s < 0) {
                s = std::int32_t(sites_.size());
                site_ix.insert(z, s);
                sites_.push_back(z);
                mass.push_back(0.0);
            }
            mass[std::size_t(s)] += ny;
        }
    }
    // deterministic order
    std::vector<std::size_t> order(sites_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b2) { return sites_[a] < sites_[b2]; });
    std::vector<Point> sorted_sites;
    std::vector<double> sorted_mass;
    for (std::size_t i : order) {
        sorted_sites.push_back(sites_[i]);
        sorted_mass.push_back(mass[i]);
    }
    sites_ = std::move(sorted_sites);
    double total = 0;
    for (double m : sorted_mass) total += m;
    LATCAP_REQUIRE(std::abs(total - 1.0) < 1e-9, "exit law must be a probability distribution");
    build_alias(sorted_mass, prob_, alias_);
}

const BallExitLaw& BallExitLaw::get(int d, int r) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<BallExitLaw>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, r);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<BallExitLaw>(new BallExitLaw(d, r))).first;
    return *it->second;
}

const std::vector<int>& BallExitLaw::radii(int d) { return radii_for(d); }

const Point& BallExitLaw::sample(RngStream& rng) const {
    return sites_[std::size_t(sample_alias(prob_, alias_, rng))];
}

double shape_distance_lb(const ShapeSpec& shape, std::int64_t N, const Point& z) {
    const int d = shape.dim;
    switch (shape.kind) {
        case ShapeKind::ball: {
            const double R = double(shape.radius.num) * double(N) / double(shape.radius.den);
            return std::sqrt(double(norm2(z, d))) - R;
        }
        case ShapeKind::box: {
            double s = 0;
            for (int i = 0; i < d; ++i) {
                const double e = std::max(0.0, std::abs(double(z[i])) - 0.5 * double(N));
                s += e * e;
            }
            return std::sqrt(s);
        }
        case ShapeKind::annulus: {
            const double r = std::sqrt(double(norm2(z, d)));
            const double Ri = double(shape.inner.num) * double(N) / double(shape.inner.den);
            const double Ro = double(shape.outer.num) * double(N) / double(shape.outer.den);
            return std::max(r - Ro, Ri - r);
        }
        case ShapeKind::union_of_boxes:
            return 0.0;
    }
    return 0.0;
}

CellIndex::CellIndex(const std::vector<Point>& pts, int d) : d_(d), shift_(4) {
    cells_.reserve(pts.size() / 8 + 8);
    for (const Point& p : pts) {
        Point c{};
        for (int i = 0; i < d_; ++i) c[i] = p[i] >> shift_;
        if (!cells_.contains(c)) cells_.insert(c, 1);
    }
}

// Conservative: true only when every occupied cell box is strictly farther
// than q. A "true" result is exact (no obstacle point within q); "false" may
// be pessimistic by up to a cell diagonal, which only delays a hop.
bool CellIndex::dist_greater(const Point& z, double q) const {
    const std::int32_t side = 1 << shift_;
    const double q2 = q * q;
    std::int32_t clo[kMaxDim], chi[kMaxDim];
    const std::int32_t reach = std::int32_t(std::floor(q)) + 1;
    for (int i = 0; i < d_; ++i) {
        clo[i] = (z[i] - reach) >> shift_;
        chi[i] = (z[i] + reach) >> shift_;
    }
    Point c{};
    std::int64_t count = 1;
    for (int i = 0; i < d_; ++i) count *= (chi[i] - clo[i] + 1);
    for (std::int64_t it = 0; it < count; ++it) {
        std::int64_t rem = it;
        double dmin2 = 0;
        for (int i = 0; i < d_; ++i) {
            std::int32_t span = chi[i] - clo[i] + 1;
            c[i] = clo[i] + std::int32_t(rem % span);
            rem /= span;
            std::int32_t lo = c[i] * side, hi = lo + side - 1;
            double dm = 0;
            if (z[i] < lo) dm = double(lo - z[i]);
            else if (z[i] > hi) dm = double(z[i] - hi);
            dmin2 += dm * dm;
        }
        if (dmin2 <= q2 && cells_.contains(c)) return false;
    }
    return true;
}

Hopper::Hopper(int d, const CellIndex* obstacles) : d_(d), obstacles_(obstacles) {
    radii_ = radii_for(d);
    // warm the caches up-front so parallel phases never build them concurrently
    for (int r : radii_) BallExitLaw::get(d, r);
}

Hopper::Hopper(int d, std::function<double(const Point&)> dist_lb)
    : d_(d), dist_lb_(std::move(dist_lb)) {
    radii_ = radii_for(d);
    for (int r : radii_) BallExitLaw::get(d, r);
}

void Hopper::advance(Point& z, RngStream& rng) {
    if (budget_ <= 2.0) {
        double q = 0;
        if (dist_lb_) {
            q = dist_lb_(z) - 1.0;
        } else if (obstacles_ == nullptr) {
            q = double(radii_.back()) + 2.0;
        } else {
            // ascending probes, bail at the first occupied scale
            for (int r : radii_) {
                if (!obstacles_->dist_greater(z, double(r) + 2.0)) break;
                q = double(r) + 2.0;
            }
        }
        budget_ = q;
    }

    int hop = 0;
    for (auto it = radii_.rbegin(); it != radii_.rend(); ++it) {
        if (double(*it) + 2.0 <= budget_) {
            hop = *it;
            break;
        }
    }
    if (hop > 0) {
        const Point& dz = BallExitLaw::get(d_, hop).sample(rng);
        z = add(z, dz, d_);
        budget_ -= double(hop) + 1.0;
    } else {
        std::uint64_t k = rng.below(std::uint64_t(2 * d_));
        int axis = int(k >> 1);
        z[axis] += (k & 1) ? -1 : 1;
        budget_ -= 1.0;
    }
}

}  // namespace latcap
