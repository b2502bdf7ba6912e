#include "latcap/killed.hpp"

#include <algorithm>

#include "latcap/errors.hpp"
#include "latcap/linsolve.hpp"

namespace latcap {

Adjacency Adjacency::build(const DomainInstance& domain) {
    Adjacency adj;
    const int d = domain.dim();
    adj.dim = d;
    adj.nbr.assign(domain.size() * std::size_t(2 * d), -1);
    std::array<Point, 2 * kMaxDim> nb;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        neighbors(domain.point(std::int32_t(i)), d, nb);
        for (int k = 0; k < 2 * d; ++k)
            adj.nbr[i * std::size_t(2 * d) + std::size_t(k)] = domain.index_of(nb[std::size_t(k)]);
    }
    return adj;
}

void apply_killed_kernel(const Adjacency& adj, const std::vector<double>& x,
                         std::vector<double>& y) {
    const int two_d = 2 * adj.dim;
    const double inv = 1.0 / double(two_d);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::int32_t* row = adj.row(std::int32_t(i));
        double s = 0;
        for (int k = 0; k < two_d; ++k) {
            std::int32_t j = row[k];
            if (j >= 0) s += x[std::size_t(j)];
        }
        y[i] = s * inv;
    }
}

KilledGreenField killed_green(DomainPtr domain, const Point& source, double tol, int max_iter) {
    const std::int32_t src = domain->index_of(source);
    if (src < 0) throw ConfigError("killed_green: source must lie in the domain");
    Adjacency adj = Adjacency::build(*domain);
    std::vector<double> b(domain->size(), 0.0);
    b[std::size_t(src)] = 1.0;
    std::vector<double> tmp;
    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        apply_killed_kernel(adj, x, tmp);
        y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - tmp[i];
    };
    KilledGreenField f;
    f.domain = std::move(domain);
    f.source = source;
    CgResult res = conjugate_gradient(matvec, b, f.values, tol, max_iter);
    if (!res.converged)
        throw NumericError("killed_green: CG stalled at residual " + std::to_string(res.residual));
    for (double& v : f.values)
        if (v < 0 && v > -1e-12) v = 0;
    return f;
}

ExitDistribution exit_distribution(const DomainInstance& domain, const Point& start, double tol) {
    DomainPtr dp(&domain, [](const DomainInstance*) {});
    KilledGreenField field = killed_green(dp, start, tol);

    const int d = domain.dim();
    const double inv = 1.0 / double(2 * d);
    // occupation mass flowing to each outside neighbor site
    std::vector<Point> sites;
    std::array<Point, 2 * kMaxDim> nb;
    PointMap site_ix;
    std::vector<double> mass;
    for (std::int32_t bi : domain.inner_boundary()) {
        neighbors(domain.point(bi), d, nb);
        for (int k = 0; k < 2 * d; ++k) {
            const Point& z = nb[std::size_t(k)];
            if (domain.index_of(z) >= 0) continue;
            std::int32_t s = site_ix.find(z);
            if (s < 0) {
                s = std::int32_t(sites.size());
                site_ix.insert(z, s);
                sites.push_back(z);
                mass.push_back(0.0);
            }
            mass[std::size_t(s)] += field.values[std::size_t(bi)] * inv;
        }
    }
    // canonical order
    std::vector<std::size_t> order(sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sites[a] < sites[b]; });
    ExitDistribution out;
    double total = 0;
    for (std::size_t i : order) {
        out.sites.push_back(sites[i]);
        out.prob.push_back(mass[i]);
        total += mass[i];
    }
    LATCAP_REQUIRE(std::abs(total - 1.0) < 1e-8, "exit distribution must sum to 1");
    for (double& p : out.prob) p /= total;
    return out;
}

std::vector<double> hit_probability_field(const DomainInstance& outer,
                                          const std::vector<Point>& target, double tol) {
    PointMap tgt;
    tgt.reserve(target.size() + 1);
    for (const Point& p : target)
        if (outer.index_of(p) >= 0) tgt.insert(p, 1);
    std::vector<double> field(outer.size(), 0.0);
    if (tgt.size() == 0) return field;

    // unknowns on outer minus target
    std::vector<Point> free_pts;
    free_pts.reserve(outer.size());
    for (const Point& p : outer.points())
        if (!tgt.contains(p)) free_pts.push_back(p);
    if (free_pts.empty()) {
        field.assign(outer.size(), 1.0);
        return field;
    }
    DomainInstance sub = DomainInstance::from_points(std::move(free_pts), outer.dim());

    const int d = outer.dim();
    const double inv = 1.0 / double(2 * d);
    std::vector<double> b(sub.size(), 0.0);
    std::array<Point, 2 * kMaxDim> nb;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        neighbors(sub.point(std::int32_t(i)), d, nb);
        int hits = 0;
        for (int k = 0; k < 2 * d; ++k)
            if (tgt.contains(nb[std::size_t(k)])) ++hits;
        if (hits) b[i] = inv * double(hits);
    }

    Adjacency adj = Adjacency::build(sub);
    std::vector<double> tmp, u;
    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        apply_killed_kernel(adj, x, tmp);
        y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - tmp[i];
    };
    CgResult res = conjugate_gradient(matvec, b, u, tol, 200000);
    if (!res.converged)
        throw NumericError("hit_probability_field: CG stalled at residual " +
                           std::to_string(res.residual));
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const Point& p = outer.point(std::int32_t(i));
        if (tgt.contains(p)) {
            field[i] = 1.0;
        } else {
            double v = u[std::size_t(sub.index_of(p))];
            field[i] = std::min(1.0, std::max(0.0, v));
        }
    }
    return field;
}

double hit_probability_before_exit(const DomainInstance& outer, const std::vector<Point>& target,
                                   const Point& start, double tol) {
    if (outer.index_of(start) < 0)
        throw ConfigError("hit_probability_before_exit: start must lie in the outer domain");
    std::vector<double> field = hit_probability_field(outer, target, tol);
    return field[std::size_t(outer.index_of(start))];
}

}  // namespace latcap
