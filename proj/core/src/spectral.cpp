#include "latcap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "latcap/errors.hpp"
#include "latcap/killed.hpp"
#include "latcap/symmetry.hpp"

namespace latcap {

namespace {

double kahan_sum_sq(const std::vector<double>& v) {
    double s = 0, c = 0;
    for (double x : v) {
        double term = x * x;
        double y = term - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// Rayleigh value and sup residual of the kernel for vector v, given pv = P v.
void eval_pair(const std::vector<double>& v, const std::vector<double>& pv,
               const std::vector<double>* weight, double& lambda, double& residual) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double w = weight ? (*weight)[i] : 1.0;
        num += w * v[i] * pv[i];
        den += w * v[i] * v[i];
    }
    lambda = num / den;
    double r = 0;
    for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(pv[i] - lambda * v[i]));
    residual = r;
}

// Shifted power iteration v <- (v + P v)/2 with l1 renormalization; stops when
// the unshifted residual of the current iterate is <= tol. On return v is the
// iterate whose (lambda, residual) are reported.
template <class MatVec>
void power_iterate(MatVec&& apply, std::vector<double>& v, const std::vector<double>* weight,
                   double tol, std::uint64_t iter_cap, double& lambda, double& residual,
                   const char* what) {
    std::vector<double> pv;
    for (std::uint64_t it = 0;; ++it) {
        apply(v, pv);
        eval_pair(v, pv, weight, lambda, residual);
        if (residual <= tol) return;
        if (it >= iter_cap)
            throw NumericError(std::string(what) + ": no convergence within iteration cap "
                               "(residual " + std::to_string(residual) + ")");
        double l1 = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = 0.5 * (v[i] + pv[i]);
            l1 += (weight ? (*weight)[i] : 1.0) * std::abs(v[i]);
        }
        for (double& x : v) x /= l1;
    }
}

}  // namespace

EigenPair principal_eigenpair(DomainPtr domain, double tol, std::uint64_t iter_cap) {
    if (!domain || domain->size() == 0) throw ConfigError("principal_eigenpair: empty domain");
    EigenPair pair;
    pair.domain = domain;
    const int two_d = 2 * domain->dim();
    const double inv = 1.0 / double(two_d);

    const bool orbit_mode = domain->is_symmetric() && domain->size() > 512;
    if (orbit_mode) {
        OrbitIndex orbits = OrbitIndex::build(*domain);
        const std::size_t n = orbits.orbit_count();
        std::vector<double> weight(n);
        for (std::size_t o = 0; o < n; ++o) weight[o] = double(orbits.orbit_size(std::int32_t(o)));
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            y.resize(n);
            for (std::size_t o = 0; o < n; ++o) {
                const std::int32_t* row = orbits.neighbor_orbits(std::int32_t(o));
                double s = 0;
                for (int k = 0; k < two_d; ++k)
                    if (row[k] >= 0) s += x[std::size_t(row[k])];
                y[o] = s * inv;
            }
        };
        std::vector<double> v(n, 1.0 / double(orbits.domain_size()));
        power_iterate(apply, v, &weight, tol, iter_cap, pair.lambda, pair.residual,
                      "principal_eigenpair");
        orbits.scatter(*domain, v, pair.phi);
    } else {
        Adjacency adj = Adjacency::build(*domain);
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            apply_killed_kernel(adj, x, y);
        };
        std::vector<double> v(domain->size(), 1.0 / double(domain->size()));
        power_iterate(apply, v, nullptr, tol, iter_cap, pair.lambda, pair.residual,
                      "principal_eigenpair");
        pair.phi = std::move(v);
    }

    double l1 = 0;
    for (double x : pair.phi) l1 += std::abs(x);
    for (double& x : pair.phi) x = std::abs(x) / l1;
    pair.lambda = std::max(0.0, pair.lambda);
    pair.phi_sq_sum = kahan_sum_sq(pair.phi);
    return pair;
}

namespace {

// canonical form for the sector odd in axis 0, symmetric in the others:
// x0 >= 1, |x1..x_{d-1}| sorted descending
Point odd_canonical(const Point& x, int d) {
    Point c{};
    c[0] = x[0] < 0 ? -x[0] : x[0];
    for (int i = 1; i < d; ++i) c[i] = x[i] < 0 ? -x[i] : x[i];
    std::sort(c.c.begin() + 1, c.c.begin() + d, std::greater<std::int32_t>());
    return c;
}

// stabilizer-orbit size of a rep: 2 (sign of x0) * tail sign choices * tail
// multiset permutations
double odd_orbit_size(const Point& r, int d) {
    int nz = 0;
    for (int k = 1; k < d; ++k)
        if (r[k] != 0) ++nz;
    double fact = 1;
    for (int k = 2; k <= d - 1; ++k) fact *= k;
    double denom = 1;
    int j = 1;
    while (j < d) {
        int k = j;
        while (k < d && r[k] == r[j]) ++k;
        double f = 1;
        for (int m = 2; m <= k - j; ++m) f *= m;
        denom *= f;
        j = k;
    }
    return 2.0 * (fact / denom) * std::pow(2.0, nz);
}

// For centered symmetric domains the subdominant eigenfunction is odd in one
// axis, so the sector's Perron mode *is* lambda_2 and needs no deflation.
double second_eigenvalue_symmetric(const DomainInstance& domain, double tol,
                                   std::uint64_t iter_cap) {
    const int d = domain.dim();
    const int two_d = 2 * d;
    const double inv = 1.0 / double(two_d);
    std::vector<Point> reps;
    for (const Point& p : domain.points())
        if (p[0] >= 1 && odd_canonical(p, d) == p) reps.push_back(p);
    if (reps.empty()) return 0.0;
    PointMap rep_ix;
    rep_ix.reserve(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) rep_ix.insert(reps[i], std::int32_t(i));

    std::vector<double> weight(reps.size());
    std::vector<std::int32_t> nbr(reps.size() * std::size_t(two_d), -1);
    std::array<Point, 2 * kMaxDim> nb;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const Point& r = reps[i];
        weight[i] = odd_orbit_size(r, d);
        neighbors(r, d, nb);
        for (int k = 0; k < two_d; ++k) {
            const Point& q = nb[std::size_t(k)];
            if (!domain.contains(q)) continue;
            if (q[0] == 0) continue;  // odd functions vanish on the reflection plane
            nbr[i * std::size_t(two_d) + std::size_t(k)] = rep_ix.find(odd_canonical(q, d));
        }
    }

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        y.resize(reps.size());
        for (std::size_t i = 0; i < reps.size(); ++i) {
            const std::int32_t* row = nbr.data() + i * std::size_t(two_d);
            double s = 0;
            for (int k = 0; k < two_d; ++k)
                if (row[k] >= 0) s += x[std::size_t(row[k])];
            y[i] = s * inv;
        }
    };
    std::vector<double> v(reps.size(), 1.0 / double(reps.size()));
    double lambda, residual;
    power_iterate(apply, v, &weight, tol, iter_cap, lambda, residual, "second_eigenvalue");
    return lambda;
}

double second_eigenvalue_general(const DomainInstance& domain, const std::vector<double>& phi,
                                 double tol, std::uint64_t iter_cap) {
    Adjacency adj = Adjacency::build(domain);
    const std::size_t n = domain.size();
    double phi2 = 0;
    for (double x : phi) phi2 += x * x;
    auto deflate = [&](std::vector<double>& v) {
        double dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * phi[i];
        const double c = dot / phi2;
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * phi[i];
    };
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        apply_killed_kernel(adj, x, y);
        deflate(y);
    };
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = double(domain.point(std::int32_t(i))[0]) + 0.25;
    deflate(v);
    double l1 = 0;
    for (double x : v) l1 += std::abs(x);
    if (l1 == 0) return 0.0;
    for (double& x : v) x /= l1;

    double lambda, residual;
    power_iterate(apply, v, nullptr, tol, iter_cap, lambda, residual, "second_eigenvalue");
    return lambda;
}

}  // namespace

double second_eigenvalue(const EigenPair& principal, double tol, std::uint64_t iter_cap) {
    const DomainInstance& domain = *principal.domain;
    if (domain.size() == 1) return 0.0;
    double l2;
    if (domain.is_symmetric() && domain.size() > 512)
        l2 = second_eigenvalue_symmetric(domain, tol, iter_cap);
    else
        l2 = second_eigenvalue_general(domain, principal.phi, tol, iter_cap);
    l2 = std::max(l2, 0.0);  // ordered by real part; clamp tiny negatives
    LATCAP_REQUIRE(l2 < principal.lambda + 1e-9, "lambda2 must not exceed lambda");
    return std::min(l2, principal.lambda);
}

double survival_spectral_log(const EigenPair& pair, const Point& x, std::uint64_t T) {
    std::int32_t ix = pair.domain->index_of(x);
    if (ix < 0 || pair.phi[std::size_t(ix)] <= 0 || pair.lambda <= 0)
        return -std::numeric_limits<double>::infinity();
    return double(T) * std::log(pair.lambda) + std::log(pair.phi[std::size_t(ix)]) -
           std::log(pair.phi_sq_sum);
}

double survival_spectral(const EigenPair& pair, const Point& x, std::uint64_t T) {
    double lg = survival_spectral_log(pair, x, T);
    return lg == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lg);
}

DomainInstance component_around(const DomainInstance& domain, const std::vector<Point>& obstacle,
                                const Point& root) {
    PointMap blocked;
    blocked.reserve(obstacle.size() + 1);
    for (const Point& p : obstacle) blocked.insert(p, 1);
    if (blocked.contains(root)) throw ConfigError("component_around: root absorbed by obstacle");
    if (domain.index_of(root) < 0) throw ConfigError("component_around: root outside domain");

    const int d = domain.dim();
    std::vector<std::uint8_t> seen(domain.size(), 0);
    std::deque<std::int32_t> queue;
    std::int32_t r0 = domain.index_of(root);
    seen[std::size_t(r0)] = 1;
    queue.push_back(r0);
    std::vector<Point> comp;
    std::array<Point, 2 * kMaxDim> nb;
    while (!queue.empty()) {
        std::int32_t i = queue.front();
        queue.pop_front();
        comp.push_back(domain.point(i));
        neighbors(domain.point(i), d, nb);
        for (int k = 0; k < 2 * d; ++k) {
            std::int32_t j = domain.index_of(nb[std::size_t(k)]);
            if (j < 0 || seen[std::size_t(j)] || blocked.contains(nb[std::size_t(k)])) continue;
            seen[std::size_t(j)] = 1;
            queue.push_back(j);
        }
    }
    return DomainInstance::from_points(std::move(comp), d);
}

SpectralGap obstacle_gap(DomainPtr ball, const std::vector<Point>& obstacle,
                         const GreenTable& table, double tol) {
    SpectralGap out;
    EigenPair base = principal_eigenpair(ball, tol);
    out.base_lambda = base.lambda;
    if (obstacle.empty()) {
        out.obstructed_lambda = base.lambda;
        out.component_size = ball->size();
        return out;
    }
    DomainPtr comp = make_domain(component_around(*ball, obstacle, Point{}));
    out.component_size = comp->size();
    EigenPair pk = principal_eigenpair(comp, tol);
    out.obstructed_lambda = pk.lambda;
    out.gap = std::max(0.0, out.base_lambda - out.obstructed_lambda);

    DomainPtr obs = make_domain(DomainInstance::from_points(
        std::vector<Point>(obstacle.begin(), obstacle.end()), ball->dim()));
    EquilibriumProfile prof = equilibrium_measure(obs, table);
    out.obstacle_capacity = prof.cap;
    return out;
}

}  // namespace latcap
