#include "latcap/interlace.hpp"

#include <algorithm>

#include "latcap/errors.hpp"

namespace latcap {

namespace {

void merge_into(std::vector<Point>& acc, const std::vector<Point>& more) {
    std::vector<Point> merged;
    merged.reserve(acc.size() + more.size());
    std::merge(acc.begin(), acc.end(), more.begin(), more.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    acc = std::move(merged);
}

}  // namespace

InterlacementSample sample_interlacement(double u, DomainPtr window,
                                         const EquilibriumProfile& profile,
                                         const HarmonicSampler& entry, const GreenTable& table,
                                         const InterlaceConfig& cfg, RngStream& rng) {
    if (u < 0) throw ConfigError("interlacement intensity must be >= 0");
    if (profile.support.get() != window.get())
        throw ConfigError("sample_interlacement: profile/window mismatch");
    InterlacementSample s;
    s.u = u;
    s.window = window;
    if (u == 0) return s;
    s.trajectory_count = rng.poisson(u * profile.cap);
    for (std::uint64_t k = 0; k < s.trajectory_count; ++k) {
        const Point x = entry.sample(rng);
        Trace tr = range_in_window(x, window, profile, table, cfg.teleport, rng);
        merge_into(s.trace, tr.visited);
        if (cfg.simulate_backward)
            backward_escape_walk(x, *window, profile, table, cfg.teleport, rng);
    }
    return s;
}

McEstimate vacancy_probability_mc(double u, const DomainInstance& K, DomainPtr window,
                                  const EquilibriumProfile& profile, const HarmonicSampler& entry,
                                  const GreenTable& table, std::uint64_t replicas,
                                  std::uint64_t master_seed, std::uint64_t grid_index,
                                  const InterlaceConfig& cfg) {
    for (const Point& p : K.points())
        if (!window->contains(p)) throw ConfigError("vacancy: K must lie inside the window");
    std::uint64_t vacant = 0;
    for (std::uint64_t r = 0; r < replicas; ++r) {
        RngStream rng = make_stream(master_seed, StreamTag::interlace, grid_index, r);
        // trajectory-by-trajectory with early exit once K is hit
        bool hit = false;
        if (u > 0) {
            std::uint64_t count = rng.poisson(u * profile.cap);
            for (std::uint64_t k = 0; k < count && !hit; ++k) {
                const Point x = entry.sample(rng);
                Trace tr = range_in_window(x, window, profile, table, cfg.teleport, rng);
                for (const Point& p : K.points()) {
                    if (tr.contains(p)) {
                        hit = true;
                        break;
                    }
                }
            }
        }
        if (!hit) ++vacant;
    }
    McEstimate est;
    est.replicas = replicas;
    est.mean = double(vacant) / double(replicas);
    est.se = std::sqrt(std::max(0.0, est.mean * (1.0 - est.mean) / double(replicas)));
    return est;
}

BernoulliField sample_bernoulli_field(double p, DomainPtr window, RngStream& rng) {
    if (p < 0 || p > 1) throw ConfigError("bernoulli parameter must be in [0,1]");
    BernoulliField f;
    f.p = p;
    f.window = window;
    if (p == 0) return f;
    for (std::size_t i = 0; i < window->size(); ++i) {
        if (p >= 1.0 || rng.uniform() < p) f.occupied.push_back(window->point(std::int32_t(i)));
    }
    return f;
}

CoupledInterlacement::CoupledInterlacement(double u_max, DomainPtr window,
                                           const EquilibriumProfile& profile,
                                           const HarmonicSampler& entry, const GreenTable& table,
                                           const InterlaceConfig& cfg, RngStream& rng)
    : u_max_(u_max), window_(window) {
    if (u_max <= 0) throw ConfigError("coupled interlacement needs u_max > 0");
    std::uint64_t count = rng.poisson(u_max * profile.cap);
    marks_.reserve(count);
    visits_.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        marks_.push_back(rng.uniform() * u_max);
        const Point x = entry.sample(rng);
        Trace tr = range_in_window(x, window, profile, table, cfg.teleport, rng);
        visits_.push_back(std::move(tr.visited));
    }
}

std::vector<Point> CoupledInterlacement::trace_at(double u) const {
    if (u < 0 || u > u_max_ + 1e-12) throw ConfigError("coupled trace level outside [0, u_max]");
    std::vector<Point> acc;
    for (std::size_t k = 0; k < marks_.size(); ++k)
        if (marks_[k] <= u) merge_into(acc, visits_[k]);
    return acc;
}

std::uint64_t CoupledInterlacement::trajectory_count_at(double u) const {
    std::uint64_t n = 0;
    for (double m : marks_)
        if (m <= u) ++n;
    return n;
}

std::uint64_t backward_escape_walk(const Point& entry, const DomainInstance& window,
                                   const EquilibriumProfile& profile, const GreenTable& table,
                                   const TeleportConfig& cfg, RngStream& rng) {
    const int d = window.dim();
    const Point center = window.center();
    const double trigger = std::max(cfg.r_out_factor * window.diameter(),
                                    2.0 * window.hull_radius() + 4.0);
    const double trigger2 = trigger * trigger;
    auto h = [&](const Point& z) -> double {
        if (window.contains(z)) return 0.0;
        return 1.0 - hitting_probability_far(profile, z, table);
    };
    Point z = entry;
    std::array<Point, 2 * kMaxDim> nb;
    std::uint64_t steps = 0;
    for (;; ++steps) {
        if (steps >= cfg.step_cap) throw NumericError("backward walk: step cap exceeded");
        if (steps > 0 && window.contains(z))
            throw NumericError("backward walk re-entered the window (h-transform violated)");
        if (double(norm2(sub(z, center, d), d)) >= trigger2) break;
        neighbors(z, d, nb);
        double w[2 * kMaxDim];
        double total = 0;
        for (int k = 0; k < 2 * d; ++k) {
            w[k] = h(nb[std::size_t(k)]);
            if (w[k] < 0) throw NumericError("backward walk: h underflow near the boundary");
            total += w[k];
        }
        if (total <= 0) throw NumericError("backward walk: h vanished on every neighbor");
        double u = rng.uniform() * total;
        double acc = 0;
        int pick = 0;
        for (int k = 0; k < 2 * d; ++k) {
            acc += w[k];
            if (u <= acc) {
                pick = k;
                break;
            }
        }
        z = nb[std::size_t(pick)];
    }
    return steps;
}

}  // namespace latcap
