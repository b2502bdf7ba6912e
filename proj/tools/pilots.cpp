#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "latcap/config.hpp"
#include "latcap/emit.hpp"
#include "latcap/errors.hpp"
#include "latcap/excursion_sampler.hpp"
#include "latcap/experiments.hpp"
#include "latcap/killed.hpp"
#include "latcap/spectral.hpp"

namespace latcap {

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double rel_se_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double var = 0;
    for (double x : v) var += (x - m) * (x - m);
    var /= double(v.size() - 1);
    return std::sqrt(var / double(v.size())) / std::abs(m);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Lemma-style gap constant: gap >= c * min(N^{-d} cap(obstacle), N^{-2}).
// Fit on a handful of conditioned annulus traces, keep half the worst ratio
// as the safety-factored constant.
nlohmann::json pilot_gap(Workspace& ws, std::uint64_t seed, int replicas) {
    const int d = 3;
    const std::int64_t N = 16;
    const Rational eps(3, 20);
    const double eta = 0.1;
    const auto& bundle = ws.bundle(ShapeSpec::ball_shape(d), N);
    AnnulusExcursionSampler sampler(bundle.domain, bundle.profile, ws.green(d), eps, eta);

    std::vector<double> ratios;
    for (int r = 0; r < replicas; ++r) {
        RngStream rng = make_stream(seed, StreamTag::pilot, 1, std::uint64_t(r));
        auto s = sampler.sample(rng);
        SpectralGap g = obstacle_gap(bundle.domain, s.trace, ws.green(d));
        const double bound = std::min(s.capacity / std::pow(double(N), double(d)),
                                      1.0 / double(N * N));
        ratios.push_back(g.gap / bound);
        std::printf("pilot gap trace %d: |trace|=%zu cap=%.4f gap=%.3e ratio=%.3f\n", r,
                    s.trace.size(), s.capacity, g.gap, ratios.back());
    }
    const double rse = rel_se_of(ratios);
    if (rse > 0.20)
        throw NumericError("gap pilot: fitted constant unstable (relative stderr " +
                           std::to_string(rse) + " > 20%); raise replicas");
    nlohmann::json j;
    j["c"] = 0.5 * *std::min_element(ratios.begin(), ratios.end());
    j["safety_factor"] = 0.5;
    j["ratios"] = ratios;
    j["relative_stderr"] = rse;
    j["d"] = d;
    j["N"] = N;
    j["eps"] = eps.str();
    j["eta"] = eta;
    j["fit_traces"] = replicas;
    j["seed"] = seed;
    return j;
}

nlohmann::json pilot_ri_endpoints(Workspace& ws, std::uint64_t seed, int replicas) {
    const int d = 3;
    const std::vector<std::int64_t> N_grid{12, 16, 24};
    const double lo_regime = 0.01, hi_regime = 100.0;
    ExperimentConfig ec;
    ec.seed = seed;
    double pilot_low = 0, pilot_high = 1;
    nlohmann::json per_n = nlohmann::json::array();
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        const std::int64_t N = N_grid[i];
        RatioResult lo = ratio_ri_direct(ws, ShapeSpec::ball_shape(d), N,
                                         lo_regime / theta(d, N), replicas, ec, 600 + 2 * i);
        RatioResult hi = ratio_ri_direct(ws, ShapeSpec::ball_shape(d), N,
                                         hi_regime / theta(d, N), replicas, ec, 601 + 2 * i);
        pilot_low = std::max(pilot_low, lo.est.mean + 3 * lo.est.se + 0.02);
        pilot_high = std::min(pilot_high, hi.est.mean - 3 * hi.est.se - 0.02);
        nlohmann::json e;
        e["N"] = N;
        e["low_mean"] = lo.est.mean;
        e["low_se"] = lo.est.se;
        e["high_mean"] = hi.est.mean;
        e["high_se"] = hi.est.se;
        per_n.push_back(std::move(e));
        std::printf("pilot RI N=%lld: low %.4f+-%.4f high %.4f+-%.4f\n",
                    static_cast<long long>(N), lo.est.mean, lo.est.se, hi.est.mean, hi.est.se);
    }
    if (pilot_high - pilot_low < 0.5)
        throw NumericError("RI endpoint pilot: separation " +
                           std::to_string(pilot_high - pilot_low) + " < 0.5");
    nlohmann::json j;
    j["pilot_low"] = pilot_low;
    j["pilot_high"] = pilot_high;
    j["lo_regime"] = lo_regime;
    j["hi_regime"] = hi_regime;
    j["N_grid"] = N_grid;
    j["replicas"] = replicas;
    j["seed"] = seed;
    j["per_N"] = per_n;
    return j;
}

// E[cap(R_t) | R_t in B_N] <= C [ (t/N^2) Theta_N + Theta_{N ^ sqrt(t)} ]:
// fit C on the (8,64) grid point.
nlohmann::json pilot_tilt(Workspace& ws, std::uint64_t seed, int replicas) {
    const int d = 3;
    const std::int64_t N = 8;
    const std::uint64_t t = 64;
    ExperimentConfig ec;
    ec.seed = seed;
    const auto& bundle = ws.bundle(ShapeSpec::ball_shape(d), N);
    RatioResult r = ratio_rw(ws, d, N, t, replicas, ec, RatioKind::RW, 650);
    const double mean_cap = r.est.mean * bundle.cap;
    const double se_cap = r.est.se * bundle.cap;
    const double nw = std::min(double(N), std::sqrt(double(t)));
    const double envelope = (double(t) / double(N * N)) * theta(d, N) +
                            theta(d, std::int64_t(std::llround(nw)));
    const double C = mean_cap / envelope;
    const double rse = se_cap / mean_cap;
    if (rse > 0.20)
        throw NumericError("tilt pilot: fitted constant unstable (relative stderr " +
                           std::to_string(rse) + ")");
    std::printf("pilot tilt: E[cap]=%.4f envelope=%.4f C=%.4f\n", mean_cap, envelope, C);
    nlohmann::json j;
    j["C"] = C;
    j["fit_N"] = N;
    j["fit_t"] = t;
    j["mean_cap"] = mean_cap;
    j["se_cap"] = se_cap;
    j["replicas"] = replicas;
    j["seed"] = seed;
    return j;
}

// Green-lower-bound constant of the excursion-hitting lemma: normalized
// hitting probability q = min_x P_x(hit trace before exiting B^{1-delta}) *
// N / cap(trace), stable across traces.
nlohmann::json pilot_hit_trace(Workspace& ws, std::uint64_t seed, int replicas) {
    const int d = 3;
    const std::int64_t N = 16;
    const Rational eps(3, 20);
    const Rational delta(1, 20);
    const double eta = 0.1;
    const auto& bundle = ws.bundle(ShapeSpec::ball_shape(d), N);
    AnnulusExcursionSampler sampler(bundle.domain, bundle.profile, ws.green(d), eps, eta);
    DomainInstance outer =
        blow_up(ShapeSpec::ball_shape(d, Rational(delta.den - delta.num, delta.den)), N);
    const ShapeSpec inner_shape =
        ShapeSpec::ball_shape(d, Rational(eps.den - 3 * eps.num, eps.den));

    std::vector<double> qs;
    for (int r = 0; r < replicas; ++r) {
        RngStream rng = make_stream(seed, StreamTag::pilot, 2, std::uint64_t(r));
        auto s = sampler.sample(rng);
        std::vector<double> field = hit_probability_field(outer, s.trace);
        double minp = 1.0;
        for (std::size_t i = 0; i < outer.size(); ++i)
            if (inner_shape.contains_scaled(outer.point(std::int32_t(i)), N))
                minp = std::min(minp, field[i]);
        qs.push_back(minp * double(N) / s.capacity);
        std::printf("pilot hit-trace %d: cap=%.3f minp=%.4f q=%.4f\n", r, s.capacity, minp,
                    qs.back());
    }
    const double rse = rel_se_of(qs);
    if (rse > 0.20)
        throw NumericError("hit-trace pilot: normalized constant unstable (relative stderr " +
                           std::to_string(rse) + ")");
    nlohmann::json j;
    j["c_delta"] = median_of(qs);
    j["values"] = qs;
    j["relative_stderr"] = rse;
    j["d"] = d;
    j["N"] = N;
    j["eps"] = eps.str();
    j["delta"] = delta.str();
    j["eta"] = eta;
    j["replicas"] = replicas;
    j["seed"] = seed;
    return j;
}

}  // namespace

int run_pilot(const RunConfig& cfg) {
    Workspace ws;
    nlohmann::json out;
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "calibration.json").string();
    // merge into an existing calibration file so pilots can run piecewise
    if (std::filesystem::exists(path)) {
        std::ifstream is(path);
        try {
            is >> out;
        } catch (...) {
            out = nlohmann::json::object();
        }
    }
    const std::string which = cfg.pilot_which;
    bool ran = false;
    if (which == "gap" || which == "all") {
        out["gap_constant"] = pilot_gap(ws, cfg.seed, which == "all" ? 5 : cfg.replicas);
        ran = true;
    }
    if (which == "ri-endpoints" || which == "all") {
        out["ri_endpoints"] = pilot_ri_endpoints(ws, cfg.seed, which == "all" ? 200 : cfg.replicas);
        ran = true;
    }
    if (which == "tilt" || which == "all") {
        out["tilt_bound"] = pilot_tilt(ws, cfg.seed, which == "all" ? 64 : cfg.replicas);
        ran = true;
    }
    if (which == "hit-trace" || which == "all") {
        out["hit_trace"] = pilot_hit_trace(ws, cfg.seed, which == "all" ? 8 : cfg.replicas);
        ran = true;
    }
    if (!ran) throw ConfigError("pilot: unknown --which " + which);
    atomic_write_file(path, out.dump(2) + "\n");
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

}  // namespace latcap
