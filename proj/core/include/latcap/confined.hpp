#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/killed.hpp"
#include "latcap/rational.hpp"
#include "latcap/rng.hpp"
#include "latcap/symmetry.hpp"

namespace latcap {

struct ConfinedConfig {
    std::uint64_t checkpoint_stride = 0;  // 0 = ceil(sqrt(t))
    std::uint64_t memory_budget_mb = 3072;
};

// Exact sampler of the SRW conditioned on R_t ⊆ A, via survival vectors
// q_s = P_A q_{s-1}, q_0 = 1 and the time-inhomogeneous tilt
// p(x,y) ∝ q_{t-s-1}(y) over neighbors y in A.
//
// Vectors are stored at checkpoints every `stride` steps as (mantissa, log
// scale) pairs, renormalized every 64 iterations; per-step ratios only ever
// divide entries of one vector, so the scaling cancels. Symmetric domains run
// the recursion on orbit representatives. Walk replicas advance in lockstep so
// one backward block replay serves all of them.
class ConfinedSampler {
public:
    static ConfinedSampler build(DomainPtr domain, std::uint64_t t, ConfinedConfig cfg = {});

    const DomainInstance& domain() const { return *domain_; }
    DomainPtr domain_ptr() const { return domain_; }
    std::uint64_t horizon() const { return t_; }
    std::uint64_t stride() const { return stride_; }

    // log P_x(R_s ⊆ A); -inf when zero. s <= t.
    double log_q(std::uint64_t s, const Point& x) const;
    double log_q_t(const Point& x) const { return log_q(t_, x); }
    double q_t(const Point& x) const;

    struct Batch {
        std::vector<std::vector<Point>> traces;  // sorted visited sets
        std::vector<std::vector<Point>> paths;   // full paths when requested
    };
    Batch sample(const Point& start, int replicas, std::uint64_t master_seed,
                 std::uint64_t grid_index, bool keep_paths = false) const;

private:
    ConfinedSampler() = default;

    std::size_t state_size() const;
    std::int32_t state_of(const Point& p) const;
    void step_vector(std::vector<double>& v, std::vector<double>& tmp) const;

    DomainPtr domain_;
    std::uint64_t t_ = 0;
    std::uint64_t stride_ = 1;
    bool orbit_mode_ = false;
    std::optional<OrbitIndex> orbits_;
    std::optional<Adjacency> adj_;
    std::vector<std::vector<double>> checkpoints_;  // s = 0, stride, 2*stride, ...
    std::vector<double> checkpoint_log_scale_;
    std::vector<double> q_final_;
    double q_final_log_scale_ = 0;
};

// Completed excursion counts of a confined path on a ball: out-times leave
// B_N^{1-2*delta} after in-times reach B_N^{1-3*eps}; count = #{i : tau_out_i <= t}.
struct ExcursionStats {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> in_times;
    std::vector<std::uint64_t> out_times;
    DomainPtr inner_shell;  // B_N^{1-3 eps}
    DomainPtr mid_shell;    // B_N^{1-2 delta}
    DomainPtr outer_shell;  // B_N^{1-delta}
};

ExcursionStats excursion_stats(const std::vector<Point>& path, const DomainInstance& ball,
                               const Rational& eps, const Rational& delta);

}  // namespace latcap
