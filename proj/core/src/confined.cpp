#include "latcap/confined.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latcap/errors.hpp"

namespace latcap {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// rescale so max ~ 1; returns the log of the factor taken out
double renormalize(std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, x);
    if (m <= 0) throw NumericError("confined sampler: survival vector vanished");
    for (double& x : v) x /= m;
    return std::log(m);
}
}  // namespace

std::size_t ConfinedSampler::state_size() const {
    return orbit_mode_ ? orbits_->orbit_count() : domain_->size();
}

std::int32_t ConfinedSampler::state_of(const Point& p) const {
    return orbit_mode_ ? orbits_->orbit_of(p) : domain_->index_of(p);
}

void ConfinedSampler::step_vector(std::vector<double>& v, std::vector<double>& tmp) const {
    const int two_d = 2 * domain_->dim();
    const double inv = 1.0 / double(two_d);
    tmp.resize(v.size());
    if (orbit_mode_) {
        for (std::size_t o = 0; o < v.size(); ++o) {
            const std::int32_t* row = orbits_->neighbor_orbits(std::int32_t(o));
            double s = 0;
            for (int k = 0; k < two_d; ++k)
                if (row[k] >= 0) s += v[std::size_t(row[k])];
            tmp[o] = s * inv;
        }
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::int32_t* row = adj_->row(std::int32_t(i));
            double s = 0;
            for (int k = 0; k < two_d; ++k)
                if (row[k] >= 0) s += v[std::size_t(row[k])];
            tmp[i] = s * inv;
        }
    }
    v.swap(tmp);
}

ConfinedSampler ConfinedSampler::build(DomainPtr domain, std::uint64_t t, ConfinedConfig cfg) {
    if (!domain || domain->size() == 0) throw ConfigError("confined sampler: empty domain");
    if (t < 1) throw ConfigError("confined sampler: horizon must be >= 1");

    ConfinedSampler cs;
    cs.domain_ = domain;
    cs.t_ = t;
    cs.orbit_mode_ = domain->is_symmetric() && domain->size() > 512;
    if (cs.orbit_mode_)
        cs.orbits_.emplace(OrbitIndex::build(*domain));
    else
        cs.adj_.emplace(Adjacency::build(*domain));

    cs.stride_ = cfg.checkpoint_stride
                     ? cfg.checkpoint_stride
                     : std::uint64_t(std::ceil(std::sqrt(double(t))));
    const std::size_t n = cs.state_size();
    const std::uint64_t n_checkpoints = t / cs.stride_ + 2;
    const std::uint64_t bytes = (n_checkpoints + cs.stride_) * n * 8;
    if (bytes > cfg.memory_budget_mb * 1024 * 1024)
        throw BudgetError("confined sampler: checkpoint memory " + std::to_string(bytes >> 20) +
                          " MB exceeds budget (raise stride or budget)");

    std::vector<double> v(n, 1.0), tmp;
    double log_scale = 0;
    cs.checkpoints_.push_back(v);
    cs.checkpoint_log_scale_.push_back(0.0);
    for (std::uint64_t s = 1; s <= t; ++s) {
        cs.step_vector(v, tmp);
        if (s % 64 == 0) log_scale += renormalize(v);
        if (s % cs.stride_ == 0 && s < t) {
            cs.checkpoints_.push_back(v);
            cs.checkpoint_log_scale_.push_back(log_scale);
        }
    }
    cs.q_final_ = v;
    cs.q_final_log_scale_ = log_scale;
    return cs;
}

double ConfinedSampler::log_q(std::uint64_t s, const Point& x) const {
    if (s > t_) throw ConfigError("log_q: s beyond horizon");
    std::int32_t ix = state_of(x);
    if (ix < 0) return kNegInf;
    auto value = [&](const std::vector<double>& vec, double ls) {
        double v = vec[std::size_t(ix)];
        return v > 0 ? std::log(v) + ls : kNegInf;
    };
    if (s == t_) return value(q_final_, q_final_log_scale_);
    const std::uint64_t k = s / stride_;
    if (k < checkpoints_.size() && k * stride_ == s)
        return value(checkpoints_[std::size_t(k)], checkpoint_log_scale_[std::size_t(k)]);
    // replay within the block
    std::vector<double> v = checkpoints_[std::size_t(k)];
    double ls = checkpoint_log_scale_[std::size_t(k)];
    std::vector<double> tmp;
    for (std::uint64_t i = k * stride_ + 1; i <= s; ++i) {
        step_vector(v, tmp);
        if (i % 64 == 0) ls += renormalize(v);
    }
    return value(v, ls);
}

double ConfinedSampler::q_t(const Point& x) const {
    double lq = log_q_t(x);
    return lq == kNegInf ? 0.0 : std::exp(lq);
}

ConfinedSampler::Batch ConfinedSampler::sample(const Point& start, int replicas,
                                               std::uint64_t master_seed,
                                               std::uint64_t grid_index, bool keep_paths) const {
    if (replicas < 1) throw ConfigError("confined sample: replicas must be >= 1");
    if (log_q_t(start) == kNegInf)
        throw ConfigError("confined sample: start has zero survival probability");
    const int d = domain_->dim();
    const int two_d = 2 * d;

    std::vector<RngStream> rng;
    rng.reserve(std::size_t(replicas));
    for (int r = 0; r < replicas; ++r)
        rng.push_back(make_stream(master_seed, StreamTag::confined, grid_index, std::uint64_t(r)));

    std::vector<Point> pos(std::size_t(replicas), start);
    std::vector<std::vector<std::uint8_t>> seen(
        std::size_t(replicas), std::vector<std::uint8_t>(domain_->size(), 0));
    Batch batch;
    if (keep_paths) batch.paths.assign(std::size_t(replicas), {start});
    const std::int32_t start_ix = domain_->index_of(start);
    LATCAP_REQUIRE(start_ix >= 0, "confined walk start must lie in the domain");
    for (auto& sv : seen) sv[std::size_t(start_ix)] = 1;

    // walk step s consumes q_{t-1-s}; replay blocks of the q recursion once,
    // descending, and advance every replica through each block
    std::vector<std::vector<double>> block;
    std::vector<double> tmp;
    std::array<Point, 2 * kMaxDim> nbr;
    const std::uint64_t nblocks = (t_ + stride_ - 1) / stride_;
    for (std::uint64_t b = nblocks; b-- > 0;) {
        const std::uint64_t j_lo = b * stride_;
        const std::uint64_t j_hi = std::min(t_ - 1, j_lo + stride_ - 1);
        // fill q_{j_lo..j_hi}
        block.assign(std::size_t(j_hi - j_lo + 1), {});
        block[0] = checkpoints_[std::size_t(b)];
        for (std::uint64_t j = j_lo + 1; j <= j_hi; ++j) {
            block[std::size_t(j - j_lo)] = block[std::size_t(j - j_lo - 1)];
            step_vector(block[std::size_t(j - j_lo)], tmp);
            if (j % 64 == 0) renormalize(block[std::size_t(j - j_lo)]);
        }
        for (std::uint64_t j = j_hi + 1; j-- > j_lo;) {
            const std::vector<double>& q = block[std::size_t(j - j_lo)];
            const std::uint64_t s = t_ - 1 - j;  // walk step index, ascending
            (void)s;
            for (int r = 0; r < replicas; ++r) {
                neighbors(pos[std::size_t(r)], d, nbr);
                double w[2 * kMaxDim];
                double total = 0;
                for (int k = 0; k < two_d; ++k) {
                    std::int32_t ix = state_of(nbr[std::size_t(k)]);
                    w[k] = ix >= 0 ? q[std::size_t(ix)] : 0.0;
                    total += w[k];
                }
                LATCAP_REQUIRE(total > 0, "confined walk: no admissible neighbor");
                double u = rng[std::size_t(r)].uniform() * total;
                int pick = 0;
                double acc = 0;
                for (int k = 0; k < two_d; ++k) {
                    acc += w[k];
                    if (u <= acc) {
                        pick = k;
                        break;
                    }
                }
                pos[std::size_t(r)] = nbr[std::size_t(pick)];
                std::int32_t px = domain_->index_of(pos[std::size_t(r)]);
                LATCAP_REQUIRE(px >= 0, "confined walk left the domain");
                seen[std::size_t(r)][std::size_t(px)] = 1;
                if (keep_paths) batch.paths[std::size_t(r)].push_back(pos[std::size_t(r)]);
            }
        }
    }

    batch.traces.resize(std::size_t(replicas));
    for (int r = 0; r < replicas; ++r) {
        auto& tr = batch.traces[std::size_t(r)];
        const auto& sv = seen[std::size_t(r)];
        for (std::size_t i = 0; i < sv.size(); ++i)
            if (sv[i]) tr.push_back(domain_->point(std::int32_t(i)));
    }
    return batch;
}

ExcursionStats excursion_stats(const std::vector<Point>& path, const DomainInstance& ball,
                               const Rational& eps, const Rational& delta) {
    const ShapeSpec* shape = ball.shape();
    if (shape == nullptr || shape->kind != ShapeKind::ball)
        throw ConfigError("excursion_stats: ball domain required");
    if (!(Rational(0, 1) < delta && delta < eps && eps < Rational(1, 4)))
        throw ConfigError("excursion_stats: need 0 < delta < eps < 1/4");
    const int d = ball.dim();
    const std::int64_t N = ball.scale();

    Rational inner_r(eps.den - 3 * eps.num, eps.den);    // 1 - 3 eps
    Rational mid_r(delta.den - 2 * delta.num, delta.den);  // 1 - 2 delta
    Rational outer_r(delta.den - delta.num, delta.den);    // 1 - delta

    ExcursionStats st;
    try {
        st.inner_shell = make_domain(blow_up(ShapeSpec::ball_shape(d, inner_r), N));
        st.mid_shell = make_domain(blow_up(ShapeSpec::ball_shape(d, mid_r), N));
        st.outer_shell = make_domain(blow_up(ShapeSpec::ball_shape(d, outer_r), N));
    } catch (const NumericError&) {
        throw NumericError("excursion_stats: shell parameters give an empty shell at N=" +
                           std::to_string(N));
    }

    const ShapeSpec inner_shape = ShapeSpec::ball_shape(d, inner_r);
    const ShapeSpec mid_shape = ShapeSpec::ball_shape(d, mid_r);
    bool seeking_in = true;
    for (std::size_t tstep = 1; tstep < path.size(); ++tstep) {
        const Point& x = path[tstep];
        if (seeking_in) {
            if (inner_shape.contains_scaled(x, N)) {
                st.in_times.push_back(tstep);
                seeking_in = false;
            }
        } else {
            if (!mid_shape.contains_scaled(x, N)) {
                st.out_times.push_back(tstep);
                seeking_in = true;
            }
        }
    }
    st.count = st.out_times.size();
    return st;
}

}  // namespace latcap
