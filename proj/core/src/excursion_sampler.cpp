#include "latcap/excursion_sampler.hpp"

#include <algorithm>
#include <cmath>

#include "latcap/errors.hpp"
#include "latcap/experiments.hpp"
#include "latcap/hopper.hpp"

namespace latcap {

AnnulusExcursionSampler::AnnulusExcursionSampler(
    DomainPtr ball, std::shared_ptr<const EquilibriumProfile> ball_profile,
    const GreenTable& table, Rational eps, double eta, TeleportConfig teleport)
    : ball_(std::move(ball)), ball_profile_(std::move(ball_profile)), table_(table),
      teleport_(teleport), eta_(eta) {
    const ShapeSpec* shape = ball_->shape();
    if (shape == nullptr || shape->kind != ShapeKind::ball)
        throw ConfigError("annulus excursions need a ball domain");
    if (!(Rational(0, 1) < eps && eps < Rational(1, 4)))
        throw ConfigError("annulus excursions need eps in (0, 1/4)");
    const int d = ball_->dim();
    const std::int64_t N = ball_->scale();
    inner_ = make_domain(blow_up(
        ShapeSpec::ball_shape(d, Rational(eps.den - 3 * eps.num, eps.den)), N));
    entry_ = make_domain(blow_up(
        ShapeSpec::ball_shape(d, Rational(eps.den - 2 * eps.num, eps.den)), N));
    outer_ = make_domain(blow_up(
        ShapeSpec::ball_shape(d, Rational(eps.den - eps.num, eps.den)), N));
    entry_profile_ = std::make_shared<const EquilibriumProfile>(
        equilibrium_measure(entry_, table_));
    ball_entry_ = std::make_shared<const HarmonicSampler>(*ball_profile_);
    threshold_ = eta_ * theta(d, std::int64_t(std::llround(eps.value() * double(N))));
}

AnnulusExcursionSampler::Sample AnnulusExcursionSampler::sample(RngStream& rng) const {
    const int d = ball_->dim();
    const double trigger = std::max(teleport_.r_out_factor * entry_->diameter(),
                                    2.0 * entry_->hull_radius() + 4.0);
    const double trigger2 = trigger * trigger;
    const auto& bidx = entry_->inner_boundary();
    std::vector<Point> bpts(bidx.size());
    std::vector<double> bw(bidx.size());
    for (std::size_t i = 0; i < bidx.size(); ++i) {
        bpts[i] = entry_->point(bidx[i]);
        bw[i] = entry_profile_->e[std::size_t(bidx[i])];
    }
    std::vector<double> weights(bpts.size());
    for (int r : BallExitLaw::radii(d)) BallExitLaw::get(d, r);

    Sample out;
    for (int attempt = 1; attempt <= max_attempts_; ++attempt) {
        out.attempts = attempt;
        Point z = ball_entry_->sample(rng);
        // phase 1: reach the entry shell B^{1-2eps} or never return
        bool entered = false;
        for (std::uint64_t step = 0;; ++step) {
            if (step >= teleport_.step_cap)
                throw NumericError("annulus excursion: step cap exceeded");
            if (entry_->contains(z)) {
                entered = true;
                break;
            }
            const double dist = std::sqrt(double(norm2(z, d))) - entry_->hull_radius();
            if (dist >= 8.0) {
                // analytic free-space certificate: the entry ball is convex
                const auto& radii = BallExitLaw::radii(d);
                int hop = 0;
                for (auto it = radii.rbegin(); it != radii.rend(); ++it)
                    if (double(*it) + 2.0 <= dist) {
                        hop = *it;
                        break;
                    }
                if (hop > 0) {
                    z = add(z, BallExitLaw::get(d, hop).sample(rng), d);
                } else {
                    std::uint64_t k = rng.below(std::uint64_t(2 * d));
                    z[int(k >> 1)] += (k & 1) ? -1 : 1;
                }
            } else {
                std::uint64_t k = rng.below(std::uint64_t(2 * d));
                z[int(k >> 1)] += (k & 1) ? -1 : 1;
            }
            if (double(norm2(z, d)) >= trigger2) {
                double total = 0;
                for (std::size_t i = 0; i < bpts.size(); ++i) {
                    weights[i] = table_.at(sub(z, bpts[i], d)) * bw[i];
                    total += weights[i];
                }
                if (rng.uniform() >= total) break;  // escaped to infinity
                double target = rng.uniform() * total;
                double acc = 0;
                std::size_t pick = 0;
                for (std::size_t i = 0; i < bpts.size(); ++i) {
                    acc += weights[i];
                    if (acc >= target) {
                        pick = i;
                        break;
                    }
                }
                z = bpts[pick];
                entered = true;
                break;
            }
        }
        if (!entered) continue;

        // phase 2: record the range until the annulus is exited
        std::vector<Point> seg{z};
        for (std::uint64_t step = 0;; ++step) {
            if (step >= teleport_.step_cap)
                throw NumericError("annulus excursion: segment step cap exceeded");
            std::uint64_t k = rng.below(std::uint64_t(2 * d));
            z[int(k >> 1)] += (k & 1) ? -1 : 1;
            seg.push_back(z);
            if (inner_->contains(z) || !outer_->contains(z)) break;
        }
        std::sort(seg.begin(), seg.end());
        seg.erase(std::unique(seg.begin(), seg.end()), seg.end());

        DomainPtr dom = make_domain(DomainInstance::from_points(seg, d));
        EquilibriumProfile prof = equilibrium_measure(dom, table_);
        if (prof.cap >= threshold_) {
            out.trace = std::move(seg);
            out.capacity = prof.cap;
            return out;
        }
    }
    throw NumericError("annulus excursion: conditioning event not reached within attempt cap");
}

}  // namespace latcap
