#include "latcap/walk.hpp"

#include <algorithm>
#include <memory>

#include "latcap/errors.hpp"
#include "latcap/hopper.hpp"

namespace latcap {

Trace srw_range(const Point& start, std::uint64_t n, DomainPtr window, int d, RngStream& rng) {
    Trace tr;
    tr.window = window;
    tr.start = start;
    tr.steps_used = n;

    if (window) {
        std::vector<std::uint8_t> seen(window->size(), 0);
        Point z = start;
        std::int32_t ix = window->index_of(z);
        if (ix >= 0) seen[std::size_t(ix)] = 1;
        for (std::uint64_t s = 0; s < n; ++s) {
            std::uint64_t k = rng.below(std::uint64_t(2 * d));
            int axis = int(k >> 1);
            z[axis] += (k & 1) ? -1 : 1;
            ix = window->index_of(z);
            if (ix >= 0) seen[std::size_t(ix)] = 1;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i]) tr.visited.push_back(window->point(std::int32_t(i)));
        // window point order is already lexicographic
        return tr;
    }

    std::vector<Point> path;
    path.reserve(std::size_t(n) + 1);
    Point z = start;
    path.push_back(z);
    for (std::uint64_t s = 0; s < n; ++s) {
        std::uint64_t k = rng.below(std::uint64_t(2 * d));
        int axis = int(k >> 1);
        z[axis] += (k & 1) ? -1 : 1;
        path.push_back(z);
    }
    std::sort(path.begin(), path.end());
    path.erase(std::unique(path.begin(), path.end()), path.end());
    tr.visited = std::move(path);
    return tr;
}

Trace range_in_window(const Point& start, DomainPtr window, const EquilibriumProfile& profile,
                      const GreenTable& table, const TeleportConfig& cfg, RngStream& rng) {
    if (profile.support.get() != window.get())
        throw ConfigError("range_in_window: profile must belong to the window");
    const int d = window->dim();
    const double diam = window->diameter();
    const Point center = window->center();
    const double trigger = std::max(cfg.r_out_factor * diam, 2.0 * window->hull_radius() + 4.0);
    const double trigger2 = trigger * trigger;

    // boundary data for the teleport decision
    const auto& bidx = window->inner_boundary();
    std::vector<Point> bpts(bidx.size());
    std::vector<double> bw(bidx.size());
    for (std::size_t i = 0; i < bidx.size(); ++i) {
        bpts[i] = window->point(bidx[i]);
        bw[i] = profile.e[std::size_t(bidx[i])];
    }
    std::vector<double> weights(bpts.size());

    // shaped windows get an analytic free-space certificate; point-set
    // windows fall back to the occupancy grid
    std::unique_ptr<CellIndex> cells;
    std::unique_ptr<Hopper> hopper;
    if (const ShapeSpec* shape = window->shape(); shape && shape->kind != ShapeKind::union_of_boxes) {
        const ShapeSpec sh = *shape;
        const std::int64_t sc = window->scale();
        hopper = std::make_unique<Hopper>(d, [sh, sc](const Point& z) {
            return shape_distance_lb(sh, sc, z);
        });
    } else {
        cells = std::make_unique<CellIndex>(window->points(), d);
        hopper = std::make_unique<Hopper>(d, cells.get());
    }

    std::vector<std::uint8_t> seen(window->size(), 0);
    Point z = start;
    {
        std::int32_t ix = window->index_of(z);
        if (ix >= 0) seen[std::size_t(ix)] = 1;
    }
    bool inside = window->contains(z);

    for (std::uint64_t step = 0;; ++step) {
        if (step >= cfg.step_cap) throw NumericError("range_in_window: step cap exceeded");
        if (inside) {
            // plain step while the window can be visited
            std::uint64_t k = rng.below(std::uint64_t(2 * d));
            int axis = int(k >> 1);
            z[axis] += (k & 1) ? -1 : 1;
            hopper->reset_budget();
        } else {
            hopper->advance(z, rng);
        }
        std::int32_t ix = window->index_of(z);
        if (ix >= 0) {
            seen[std::size_t(ix)] = 1;
            inside = true;
            continue;
        }
        inside = false;
        if (double(norm2(sub(z, center, d), d)) >= trigger2) {
            // resolve the far excursion by the last-exit identity
            double total = 0;
            for (std::size_t i = 0; i < bpts.size(); ++i) {
                weights[i] = table.at(sub(z, bpts[i], d)) * bw[i];
                total += weights[i];
            }
            if (total > 1.0 + 1e-6)
                throw NumericError("teleport return probability exceeds 1");
            if (rng.uniform() >= total) break;  // never returns
            double target = rng.uniform() * total;
            std::size_t pick = 0;
            double acc = 0;
            for (std::size_t i = 0; i < bpts.size(); ++i) {
                acc += weights[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
            z = bpts[pick];
            std::int32_t rix = window->index_of(z);
            seen[std::size_t(rix)] = 1;
            inside = true;
            hopper->reset_budget();
        }
    }

    Trace tr;
    tr.window = window;
    tr.start = start;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) tr.visited.push_back(window->point(std::int32_t(i)));
    return tr;
}

}  // namespace latcap
