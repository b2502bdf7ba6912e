#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "latcap/confined.hpp"
#include "latcap/interlace.hpp"

namespace latcap {

// Theta_N: the scale of E[cap(R_{N^2})] — N (d=3), N^2/log N (d=4, natural
// log), N^2 (d>=5).
double theta(int d, std::int64_t N);

enum class RatioKind { RI, RI_reduced, RW, Bernoulli, Volume };
std::string ratio_kind_name(RatioKind k);

// Shared caches: one Green table per dimension, one equilibrium bundle per
// (shape, N). Build happens on first use, before replica fan-out.
class Workspace {
public:
    const GreenTable& green(int d);

    struct Bundle {
        DomainPtr domain;
        std::shared_ptr<const EquilibriumProfile> profile;
        std::shared_ptr<const HarmonicSampler> entry;
        double cap = 0;
    };
    const Bundle& bundle(const ShapeSpec& shape, std::int64_t N);

    static int default_r0(int d);

private:
    std::map<int, std::shared_ptr<const GreenTable>> greens_;
    std::map<std::string, Bundle> bundles_;
};

struct TraceCapacityPolicy {
    std::size_t exact_max = 4000;      // dense solver cap on trace size
    int mc_replicas = 4;
    std::size_t mc_point_sample = 4000;  // 0 = every boundary point
    double mc_radius_factor = 5.0;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int workers = 1;
    TraceCapacityPolicy cap_policy;
    TeleportConfig teleport;
    bool record_timing = false;  // keeps CSV bytes reproducible by default
};

struct ReplicaRow {
    std::uint64_t replica = 0;
    double value = 0;
    std::string cap_method;
    double wall_ms = 0;
};

struct RatioEstimate {
    RatioKind kind = RatioKind::RI;
    int d = 3;
    std::string shape;
    std::int64_t N = 0;
    double driver = 0;       // u (RI/Bernoulli) or t (RW/Volume)
    double theta_value = 0;
    double regime_parameter = 0;
    double mean = 0;
    double se = 0;
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
};

struct RatioResult {
    RatioEstimate est;
    std::vector<ReplicaRow> rows;
};

// cap(I(u) ∩ D_N) / cap(D_N), one interlacement sample per replica.
RatioResult ratio_ri_direct(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                            int replicas, const ExperimentConfig& cfg,
                            std::uint64_t grid_index = 0);

// 1 - mean_x~ebar E_x[exp(-u cap(R_infty ∩ D_N))]: the last-exit reduction of
// the same expectation; per replica one teleport-truncated walk.
RatioResult ratio_ri_reduced(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                             int replicas, const ExperimentConfig& cfg,
                             std::uint64_t grid_index = 0);

// cap(R_t)/cap(B_N) (kind RW) or |R_t|/|B_N| (kind Volume) under the exact
// confined-walk law on the ball.
RatioResult ratio_rw(Workspace& ws, int d, std::int64_t N, std::uint64_t t, int replicas,
                     const ExperimentConfig& cfg, RatioKind kind = RatioKind::RW,
                     std::uint64_t grid_index = 0);

// cap(B(p) ∩ D_N)/cap(D_N) with p = 1 - e^{-u}.
RatioResult ratio_bernoulli(Workspace& ws, const ShapeSpec& shape, std::int64_t N, double u,
                            int replicas, const ExperimentConfig& cfg,
                            std::uint64_t grid_index = 0);

struct LlnPoint {
    std::uint64_t n = 0;
    std::vector<double> normalized;  // per replica, dimension-specific scaling
    double mean = 0;
    double se = 0;
};

struct CapacityLlnResult {
    int d = 3;
    std::vector<LlnPoint> points;
    double alpha_estimate = 0;  // d >= 5: normalized mean at the largest n
};

// cap(R_n)/n (d>=5), cap(R_n) log n / n (d=4), cap(R_n)/sqrt(n) (d=3).
CapacityLlnResult lln_capacity(Workspace& ws, int d, const std::vector<std::uint64_t>& n_grid,
                               int replicas, const ExperimentConfig& cfg);

struct SweepPoint {
    std::int64_t N = 0;
    double requested_regime = 0;
    RatioEstimate est;
    std::vector<ReplicaRow> rows;
};

struct SweepRecord {
    RatioKind kind = RatioKind::RI;
    int d = 3;
    std::string shape;
    std::uint64_t seed = 0;
    std::vector<SweepPoint> points;  // N-major, regime-minor order
};

// Drivers chosen from the regime grid: u = regime/Theta_N for RI/Bernoulli,
// t = max(1, round(regime N^d / Theta_N)) for RW/Volume (the recorded
// regime_parameter is recomputed from the integer driver).
SweepRecord sweep_phase_transition(Workspace& ws, RatioKind kind, int d, const ShapeSpec& shape,
                                   const std::vector<std::int64_t>& N_grid,
                                   const std::vector<double>& regime_grid, int replicas,
                                   const ExperimentConfig& cfg);

// Capacity of a sampled point set under the exact-vs-MC size policy.
struct CapacityValue {
    double value = 0;
    const char* method = "exact";
};
CapacityValue trace_capacity(std::vector<Point> pts, int d, const GreenTable& table,
                             const TraceCapacityPolicy& policy, std::uint64_t seed,
                             std::uint64_t grid_index, std::uint64_t replica);

}  // namespace latcap
