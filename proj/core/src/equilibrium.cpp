#include "latcap/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "latcap/alias.hpp"
#include "latcap/errors.hpp"
#include "latcap/hopper.hpp"
#include "latcap/linsolve.hpp"
#include "latcap/symmetry.hpp"

namespace latcap {

namespace {

// Residual of the defining system sum_y g(x-y) e(y) = 1 over a set of probe
// points; e given on boundary points only.
double system_residual(const std::vector<Point>& probes, const std::vector<Point>& bpts,
                       const std::vector<double>& be, const GreenTable& g, int d) {
    double worst = 0;
    for (const Point& x : probes) {
        double s = 0;
        for (std::size_t j = 0; j < bpts.size(); ++j) s += g.at(sub(x, bpts[j], d)) * be[j];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

}  // namespace

EquilibriumProfile equilibrium_measure(DomainPtr K, const GreenTable& table,
                                       const SolverConfig& cfg) {
    if (!K || K->size() == 0) throw ConfigError("equilibrium_measure: empty set");
    if (K->dim() != table.dim()) throw ConfigError("equilibrium_measure: dimension mismatch");
    const int d = K->dim();
    const auto& bidx = K->inner_boundary();
    const std::size_t m = bidx.size();

    EquilibriumProfile prof;
    prof.support = K;
    prof.e.assign(K->size(), 0.0);

    std::vector<Point> bpts(m);
    for (std::size_t i = 0; i < m; ++i) bpts[i] = K->point(bidx[i]);
    std::vector<double> be(m, 0.0);

    if (K->is_symmetric() && m > 64) {
        // orbit-reduced boundary system
        OrbitIndex orbits = OrbitIndex::build(*K);
        std::vector<std::int32_t> borb;
        for (std::size_t o = 0; o < orbits.orbit_count(); ++o)
            if (orbits.rep_is_boundary(std::int32_t(o))) borb.push_back(std::int32_t(o));
        const std::size_t nb = borb.size();
        Eigen::MatrixXd M(nb, nb);
        for (std::size_t j = 0; j < nb; ++j) {
            std::vector<Point> members = orbits.expand(borb[j]);
            for (std::size_t i = 0; i < nb; ++i) {
                const Point& x = orbits.rep(borb[i]);
                double s = 0;
                for (const Point& y : members) s += table.at(sub(x, y, d));
                M(Eigen::Index(i), Eigen::Index(j)) = s;
            }
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(Eigen::Index(nb));
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
        Eigen::VectorXd eo = lu.solve(rhs);
        if (!eo.allFinite()) throw NumericError("equilibrium solve: singular orbit system");
        // scatter to boundary points
        for (std::size_t i = 0; i < m; ++i) {
            std::int32_t o = orbits.orbit_of(bpts[i]);
            auto it = std::lower_bound(borb.begin(), borb.end(), o);
            LATCAP_REQUIRE(it != borb.end() && *it == o, "boundary point maps to boundary orbit");
            be[i] = eo[Eigen::Index(it - borb.begin())];
        }
    } else if (m <= cfg.dense_max) {
        Eigen::MatrixXd G(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double v = table.at(sub(bpts[i], bpts[j], d));
                G(Eigen::Index(i), Eigen::Index(j)) = v;
                G(Eigen::Index(j), Eigen::Index(i)) = v;
            }
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            throw NumericError("equilibrium solve: Green matrix not SPD (duplicate points?)");
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(Eigen::Index(m));
        Eigen::VectorXd x = llt.solve(rhs);
        for (std::size_t i = 0; i < m; ++i) be[i] = x[Eigen::Index(i)];
    } else {
        // matrix-free conjugate gradients on the boundary system
        auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
            y.assign(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0;
                for (std::size_t j = 0; j < m; ++j) s += table.at(sub(bpts[i], bpts[j], d)) * x[j];
                y[i] = s;
            }
        };
        std::vector<double> rhs(m, 1.0);
        CgResult res = conjugate_gradient(matvec, rhs, be, cfg.tol * 1e-2, cfg.cg_max_iter);
        if (!res.converged)
            throw NumericError("equilibrium solve: CG stalled at residual " +
                               std::to_string(res.residual));
    }

    double cap = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (be[i] < 0) {
            if (be[i] < -1e-7) throw NumericError("equilibrium weight negative beyond tolerance");
            be[i] = 0;
        }
        if (be[i] > 1.0 + 1e-7) throw NumericError("equilibrium weight exceeds 1");
        be[i] = std::min(be[i], 1.0);
        cap += be[i];
        prof.e[std::size_t(bidx[i])] = be[i];
    }
    LATCAP_REQUIRE(cap > 0, "capacity must be positive for a nonempty set");
    prof.cap = cap;
    prof.ebar.assign(K->size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) prof.ebar[std::size_t(bidx[i])] = be[i] / cap;

    // residual probes: every point when affordable, else boundary + stride
    // sample of the rest
    std::vector<Point> probes;
    const std::size_t budget = 200000000;
    if (K->size() * m <= budget) {
        probes = K->points();
    } else {
        std::size_t nprobe = std::max<std::size_t>(16, budget / std::max<std::size_t>(m, 1));
        nprobe = std::min({nprobe, cfg.residual_sample, K->size()});
        std::size_t stride = std::max<std::size_t>(1, K->size() / nprobe);
        for (std::size_t i = 0; i < K->size(); i += stride) probes.push_back(K->point(std::int32_t(i)));
    }
    prof.residual = system_residual(probes, bpts, be, table, d);
    if (prof.residual > cfg.tol)
        throw NumericError("equilibrium residual " + std::to_string(prof.residual) +
                           " exceeds tolerance");
    return prof;
}

double hitting_probability_far(const EquilibriumProfile& profile, const Point& z,
                               const GreenTable& table) {
    const DomainInstance& K = *profile.support;
    const int d = K.dim();
    double s = 0;
    for (std::int32_t bi : K.inner_boundary())
        s += table.at(sub(z, K.point(bi), d)) * profile.e[std::size_t(bi)];
    if (s > 1.0 + 1e-6)
        throw NumericError("hitting probability " + std::to_string(s) +
                           " > 1 (Green table inconsistency)");
    return std::min(s, 1.0);
}

double escape_probability(const EquilibriumProfile& profile, const Point& x,
                          const GreenTable& table) {
    const DomainInstance& K = *profile.support;
    const int d = K.dim();
    std::array<Point, 2 * kMaxDim> nb;
    neighbors(x, d, nb);
    double hit = 0;
    for (int k = 0; k < 2 * d; ++k) {
        const Point& y = nb[std::size_t(k)];
        hit += K.contains(y) ? 1.0 : hitting_probability_far(profile, y, table);
    }
    return 1.0 - hit / double(2 * d);
}

HarmonicSampler::HarmonicSampler(const EquilibriumProfile& profile) {
    const DomainInstance& K = *profile.support;
    std::vector<double> w;
    for (std::int32_t bi : K.inner_boundary()) {
        pts_.push_back(K.point(bi));
        w.push_back(profile.ebar[std::size_t(bi)]);
    }
    build_alias(w, prob_, alias_);
}

const Point& HarmonicSampler::sample(RngStream& rng) const {
    return pts_[std::size_t(sample_alias(prob_, alias_, rng))];
}

McEstimate capacity_mc(const DomainInstance& K, const GreenTable& table,
                       const CapacityMcConfig& cfg, std::uint64_t master_seed) {
    const int d = K.dim();
    const double diam = K.diameter();
    const double R = cfg.radius > 0 ? cfg.radius : cfg.radius_factor * diam;
    if (R < 2.0 * diam)
        throw ConfigError("capacity_mc: stop radius must be >= 2 * diameter");
    if (cfg.replicas < 1) throw ConfigError("capacity_mc: replicas must be >= 1");
    const Point center = K.center();
    const double R2 = R * R;

    CellIndex cells(K.points(), d);
    Hopper hopper(d, &cells);

    const auto& bidx = K.inner_boundary();
    const std::size_t m = bidx.size();
    const bool subsample = cfg.point_sample_max > 0 && m > cfg.point_sample_max;
    const std::size_t npts = subsample ? cfg.point_sample_max : m;

    std::vector<double> caps;
    caps.reserve(std::size_t(cfg.replicas));
    for (int rep = 0; rep < cfg.replicas; ++rep) {
        RngStream rng = make_stream(master_seed, StreamTag::capacity, cfg.grid_index,
                                    std::uint64_t(rep));
        double escapes = 0;
        double gbar_sum = 0;
        std::uint64_t gbar_n = 0;
        for (std::size_t s = 0; s < npts; ++s) {
            std::size_t pi = subsample ? std::size_t(rng.below(m)) : s;
            const Point start = K.point(bidx[pi]);
            for (int w = 0; w < cfg.walks_per_point; ++w) {
                Point z = start;
                hopper.reset_budget();
                bool escaped = false;
                for (std::uint64_t step = 0;; ++step) {
                    if (step >= cfg.step_cap)
                        throw NumericError("capacity_mc: step cap exceeded");
                    hopper.advance(z, rng);
                    if (hopper.budget() < 1.0 && K.contains(z)) break;  // returned
                    if (double(norm2(sub(z, center, d), d)) >= R2) {
                        escaped = true;
                        break;
                    }
                }
                if (escaped) {
                    escapes += 1.0;
                    gbar_sum += table.at(sub(z, center, d));
                    ++gbar_n;
                }
            }
        }
        const double scale = double(m) / double(npts) / double(cfg.walks_per_point);
        const double S = escapes * scale;
        double cap = S;
        if (gbar_n > 0 && S > 0) {
            const double gbar = gbar_sum / double(gbar_n);
            for (int it = 0; it < 200; ++it) {
                double next = S / (1.0 + cap * gbar);
                if (std::abs(next - cap) < 1e-10 * std::max(1.0, cap)) {
                    cap = next;
                    break;
                }
                cap = next;
            }
        }
        caps.push_back(cap);
    }

    McEstimate est;
    est.replicas = std::uint64_t(cfg.replicas);
    double mean = 0;
    for (double c : caps) mean += c;
    mean /= double(caps.size());
    est.mean = mean;
    if (caps.size() >= 2) {
        double var = 0;
        for (double c : caps) var += (c - mean) * (c - mean);
        var /= double(caps.size() - 1);
        est.se = std::sqrt(var / double(caps.size()));
    }
    return est;
}

}  // namespace latcap
