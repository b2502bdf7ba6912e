#include "latcap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "latcap/errors.hpp"
#include "latcap/pool.hpp"

namespace latcap {

double theta(int d, std::int64_t N) {
    if (d < 3) throw ConfigError("theta: d must be >= 3");
    if (N < 2 && d == 4) throw ConfigError("theta: N must be >= 2 in d = 4");
    if (N < 1) throw ConfigError("theta: N must be >= 1");
    if (d == 3) return double(N);
    if (d == 4) return double(N) * double(N) / std::log(double(N));
    return double(N) * double(N);
}

std::string ratio_kind_name(RatioKind k) {
    switch (k) {
        case RatioKind::RI: return "RI";
        case RatioKind::RI_reduced: return "RI_reduced";
        case RatioKind::RW: return "RW";
        case RatioKind::Bernoulli: return "Bernoulli";
        case RatioKind::Volume: return "Volume";
    }
    return "?";
}

int Workspace::default_r0(int d) {
    switch (d) {
        case 3: return 36;
        case 4: return 20;
        case 5: return 16;
        case 6: return 12;
        case 7: return 10;
        default: return 9;
    }
}

const GreenTable& Workspace::green(int d) {
    auto it = greens_.find(d);
    if (it == greens_.end()) {
        auto t = std::make_shared<const GreenTable>(GreenTable::build(d, default_r0(d)));
        it = greens_.emplace(d, std::move(t)).first;
    }
    return *it->second;
}

const Workspace::Bundle& Workspace::bundle(const ShapeSpec& shape, std::int64_t N) {
    std::string key = std::to_string(shape.dim) + "|" + shape.str() + "|" + std::to_string(N);
    auto it = bundles_.find(key);
    if (it == bundles_.end()) {
        Bundle b;
        b.domain = make_domain(blow_up(shape, N));
        auto prof = std::make_shared<EquilibriumProfile>(
            equilibrium_measure(b.domain, green(shape.dim)));
        b.cap = prof->cap;
        b.entry = std::make_shared<const HarmonicSampler>(*prof);
        b.profile = std::move(prof);
        it = bundles_.emplace(std::move(key), std::move(b)).first;
    }
    return it->second;
}

CapacityValue trace_capacity(std::vector<Point> pts, int d, const GreenTable& table,
                             const TraceCapacityPolicy& policy, std::uint64_t seed,
                             std::uint64_t grid_index, std::uint64_t replica) {
    CapacityValue out;
    if (pts.empty()) {
        out.value = 0;
        out.method = "empty";
        return out;
    }
    DomainPtr dom = make_domain(DomainInstance::from_points(std::move(pts), d));
    if (dom->size() <= policy.exact_max) {
        EquilibriumProfile prof = equilibrium_measure(dom, table);
        out.value = prof.cap;
        out.method = "exact";
        return out;
    }
    CapacityMcConfig mc;
    mc.radius_factor = policy.mc_radius_factor;
    mc.replicas = policy.mc_replicas;
    mc.point_sample_max = policy.mc_point_sample;
    mc.grid_index = grid_index;
    const std::uint64_t sub_seed =
        mix64(seed ^ mix64(pack_stream(StreamTag::capacity, grid_index, replica)));
    McEstimate est = capacity_mc(*dom, table, mc, sub_seed);
    out.value = est.mean;
    out.method = "mc";
    return out;
}

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void finalize_estimate(RatioResult& res) {
    const std::size_t n = res.rows.size();
    double mean = 0;
    for (const auto& r : res.rows) mean += r.value;
    mean /= double(n);
    double var = 0;
    for (const auto& r : res.rows) var += (r.value - mean) * (r.value - mean);
    res.est.mean = mean;
    res.est.se = n >= 2 ? std::sqrt(var / double(n - 1) / double(n)) : 0.0;
    res.est.replicas = n;
}

RatioResult make_result(RatioKind kind, int d, const std::string& shape, std::int64_t N,
                        double driver, double regime, std::uint64_t seed, int replicas) {
    RatioResult res;
    res.est.kind = kind;
    res.est.d = d;
    res.est.shape = shape;
    res.est.N = N;
    res.est.driver = driver;
    res.est.theta_value = theta(d, N);
    res.est.regime_parameter = regime;
    res.est.seed = seed;
    res.rows.resize(std::size_t(replicas));
    return res;
}

}  // namespace

RatioResult ratio_ri_direct(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                            int replicas, const ExperimentConfig& cfg, std::uint64_t grid_index) {
    const int d = shape.dim;
    const auto& bundle = ws.bundle(shape, N);
    const GreenTable& table = ws.green(d);
    RatioResult res = make_result(RatioKind::RI, d, shape.str(), N, u, u * theta(d, N), cfg.seed,
                                  replicas);
    InterlaceConfig icfg;
    icfg.teleport = cfg.teleport;
    run_indexed(std::size_t(replicas), cfg.workers, [&](std::size_t r) {
        double t0 = cfg.record_timing ? now_ms() : 0;
        RngStream rng = make_stream(cfg.seed, StreamTag::interlace, grid_index, r);
        InterlacementSample s =
            sample_interlacement(u, bundle.domain, *bundle.profile, *bundle.entry, table, icfg, rng);
        ReplicaRow& row = res.rows[r];
        row.replica = r;
        if (s.trace.empty()) {
            row.value = 0;
            row.cap_method = "empty";
        } else {
            CapacityValue cv =
                trace_capacity(std::move(s.trace), d, table, cfg.cap_policy, cfg.seed, grid_index, r);
            row.value = cv.value / bundle.cap;
            row.cap_method = cv.method;
        }
        if (cfg.record_timing) row.wall_ms = now_ms() - t0;
    });
    finalize_estimate(res);
    return res;
}

RatioResult ratio_ri_reduced(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                             int replicas, const ExperimentConfig& cfg, std::uint64_t grid_index) {
    const int d = shape.dim;
    const auto& bundle = ws.bundle(shape, N);
    const GreenTable& table = ws.green(d);
    RatioResult res = make_result(RatioKind::RI_reduced, d, shape.str(), N, u, u * theta(d, N),
                                  cfg.seed, replicas);
    run_indexed(std::size_t(replicas), cfg.workers, [&](std::size_t r) {
        double t0 = cfg.record_timing ? now_ms() : 0;
        RngStream rng = make_stream(cfg.seed, StreamTag::walker, grid_index, r);
        const Point x = bundle.entry->sample(rng);
        Trace tr = range_in_window(x, bundle.domain, *bundle.profile, table, cfg.teleport, rng);
        // traces from a window start stay small; the dense solver always applies
        TraceCapacityPolicy exact_policy = cfg.cap_policy;
        exact_policy.exact_max = std::max<std::size_t>(exact_policy.exact_max, tr.visited.size());
        CapacityValue cv = trace_capacity(std::move(tr.visited), d, table, exact_policy, cfg.seed,
                                          grid_index, r);
        ReplicaRow& row = res.rows[r];
        row.replica = r;
        row.value = 1.0 - std::exp(-u * cv.value);
        row.cap_method = cv.method;
        if (cfg.record_timing) row.wall_ms = now_ms() - t0;
    });
    finalize_estimate(res);
    return res;
}

RatioResult ratio_rw(Workspace& ws, int d, std::int64_t N, std::uint64_t t, int replicas,
                     const ExperimentConfig& cfg, RatioKind kind, std::uint64_t grid_index) {
    if (kind != RatioKind::RW && kind != RatioKind::Volume)
        throw ConfigError("ratio_rw: kind must be RW or Volume");
    const ShapeSpec shape = ShapeSpec::ball_shape(d);
    const auto& bundle = ws.bundle(shape, N);
    const GreenTable& table = ws.green(d);
    const double regime = double(t) * theta(d, N) / std::pow(double(N), double(d));
    RatioResult res = make_result(kind, d, shape.str(), N, double(t), regime, cfg.seed, replicas);

    std::vector<std::vector<Point>> traces;
    if (t == 0) {
        traces.assign(std::size_t(replicas), {Point{}});
    } else {
        ConfinedSampler sampler = ConfinedSampler::build(bundle.domain, t);
        auto batch = sampler.sample(Point{}, replicas, cfg.seed, grid_index, false);
        traces = std::move(batch.traces);
    }
    run_indexed(std::size_t(replicas), cfg.workers, [&](std::size_t r) {
        double t0 = cfg.record_timing ? now_ms() : 0;
        ReplicaRow& row = res.rows[r];
        row.replica = r;
        if (kind == RatioKind::Volume) {
            row.value = double(traces[r].size()) / double(bundle.domain->size());
            row.cap_method = "count";
        } else {
            CapacityValue cv = trace_capacity(std::move(traces[r]), d, table, cfg.cap_policy,
                                              cfg.seed, grid_index, r);
            row.value = cv.value / bundle.cap;
            row.cap_method = cv.method;
        }
        if (cfg.record_timing) row.wall_ms = now_ms() - t0;
    });
    finalize_estimate(res);
    return res;
}

RatioResult ratio_bernoulli(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                            int replicas, const ExperimentConfig& cfg, std::uint64_t grid_index) {
    const int d = shape.dim;
    const auto& bundle = ws.bundle(shape, N);
    const GreenTable& table = ws.green(d);
    const double p = 1.0 - std::exp(-u);
    RatioResult res = make_result(RatioKind::Bernoulli, d, shape.str(), N, u, u * theta(d, N),
                                  cfg.seed, replicas);
    run_indexed(std::size_t(replicas), cfg.workers, [&](std::size_t r) {
        double t0 = cfg.record_timing ? now_ms() : 0;
        RngStream rng = make_stream(cfg.seed, StreamTag::bernoulli, grid_index, r);
        BernoulliField f = sample_bernoulli_field(p, bundle.domain, rng);
        ReplicaRow& row = res.rows[r];
        row.replica = r;
        if (f.occupied.empty()) {
            row.value = 0;
            row.cap_method = "empty";
        } else {
            CapacityValue cv = trace_capacity(std::move(f.occupied), d, table, cfg.cap_policy,
                                              cfg.seed, grid_index, r);
            row.value = cv.value / bundle.cap;
            row.cap_method = cv.method;
        }
        if (cfg.record_timing) row.wall_ms = now_ms() - t0;
    });
    finalize_estimate(res);
    return res;
}

CapacityLlnResult lln_capacity(Workspace& ws, int d, const std::vector<std::uint64_t>& n_grid,
                               int replicas, const ExperimentConfig& cfg) {
    if (n_grid.empty()) throw ConfigError("lln_capacity: empty n grid");
    for (std::uint64_t n : n_grid)
        if (n > 4000000) throw BudgetError("lln_capacity: n exceeds the desk budget 4e6");
    const GreenTable& table = ws.green(d);
    CapacityLlnResult out;
    out.d = d;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::uint64_t n = n_grid[gi];
        LlnPoint pt;
        pt.n = n;
        pt.normalized.assign(std::size_t(replicas), 0.0);
        run_indexed(std::size_t(replicas), cfg.workers, [&](std::size_t r) {
            RngStream rng = make_stream(cfg.seed, StreamTag::walker, gi, r);
            Trace tr = srw_range(Point{}, n, nullptr, d, rng);
            CapacityValue cv =
                trace_capacity(std::move(tr.visited), d, table, cfg.cap_policy, cfg.seed, gi, r);
            double norm;
            if (d >= 5) norm = cv.value / double(n);
            else if (d == 4) norm = cv.value * std::log(double(n)) / double(n);
            else norm = cv.value / std::sqrt(double(n));
            pt.normalized[r] = norm;
        });
        double mean = 0;
        for (double v : pt.normalized) mean += v;
        mean /= double(replicas);
        double var = 0;
        for (double v : pt.normalized) var += (v - mean) * (v - mean);
        pt.mean = mean;
        pt.se = replicas >= 2 ? std::sqrt(var / double(replicas - 1) / double(replicas)) : 0.0;
        out.points.push_back(std::move(pt));
    }
    if (d >= 5) out.alpha_estimate = out.points.back().mean;
    return out;
}

SweepRecord sweep_phase_transition(Workspace& ws, RatioKind kind, int d, const ShapeSpec& shape,
                                   const std::vector<std::int64_t>& N_grid,
                                   const std::vector<double>& regime_grid, int replicas,
                                   const ExperimentConfig& cfg) {
    if (N_grid.empty() || regime_grid.empty()) throw ConfigError("sweep: empty grid");
    SweepRecord rec;
    rec.kind = kind;
    rec.d = d;
    rec.shape = shape.str();
    rec.seed = cfg.seed;
    std::uint64_t grid_index = 0;
    for (std::int64_t N : N_grid) {
        for (double regime : regime_grid) {
            SweepPoint pt;
            pt.N = N;
            pt.requested_regime = regime;
            RatioResult rr;
            switch (kind) {
                case RatioKind::RI:
                    rr = ratio_ri_direct(ws, shape, N, regime / theta(d, N), replicas, cfg,
                                         grid_index);
                    break;
                case RatioKind::RI_reduced:
                    rr = ratio_ri_reduced(ws, shape, N, regime / theta(d, N), replicas, cfg,
                                          grid_index);
                    break;
                case RatioKind::Bernoulli:
                    rr = ratio_bernoulli(ws, shape, N, regime / theta(d, N), replicas, cfg,
                                         grid_index);
                    break;
                case RatioKind::RW:
                case RatioKind::Volume: {
                    const double traw = regime * std::pow(double(N), double(d)) / theta(d, N);
                    const std::uint64_t t = std::uint64_t(std::max(1.0, std::llround(traw) * 1.0));
                    rr = ratio_rw(ws, d, N, t, replicas, cfg, kind, grid_index);
                    break;
                }
            }
            pt.est = rr.est;
            pt.rows = std::move(rr.rows);
            rec.points.push_back(std::move(pt));
            ++grid_index;
        }
    }
    return rec;
}

}  // namespace latcap
