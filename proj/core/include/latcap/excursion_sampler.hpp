#pragma once

#include <cstdint>
#include <vector>

#include "latcap/equilibrium.hpp"
#include "latcap/rational.hpp"
#include "latcap/walk.hpp"

namespace latcap {

// Annulus excursion traces: from a harmonic-measure start on the ball
// boundary, the walk is run to its first entry of B_N^{1-2eps} (far
// excursions resolved by the last-exit teleport; "never hits" rejects the
// attempt), then the range segment until it exits the annulus
// B_N^{1-eps} \ B_N^{1-3eps} is recorded. Samples are conditioned on the
// segment capacity reaching eta * Theta_{eps N}.
class AnnulusExcursionSampler {
public:
    AnnulusExcursionSampler(DomainPtr ball, std::shared_ptr<const EquilibriumProfile> ball_profile,
                            const GreenTable& table, Rational eps, double eta,
                            TeleportConfig teleport = {});

    struct Sample {
        std::vector<Point> trace;  // sorted
        double capacity = 0;
        int attempts = 0;
    };
    Sample sample(RngStream& rng) const;

    double eta_threshold() const { return threshold_; }
    const DomainInstance& inner_shell() const { return *inner_; }   // B^{1-3eps}
    const DomainInstance& entry_shell() const { return *entry_; }   // B^{1-2eps}
    const DomainInstance& outer_shell() const { return *outer_; }   // B^{1-eps}

private:
    DomainPtr ball_;
    std::shared_ptr<const EquilibriumProfile> ball_profile_;
    const GreenTable& table_;
    TeleportConfig teleport_;
    double eta_ = 0;
    double threshold_ = 0;  // eta * Theta_{eps N}
    DomainPtr inner_, entry_, outer_;
    std::shared_ptr<const EquilibriumProfile> entry_profile_;
    std::shared_ptr<const HarmonicSampler> ball_entry_;
    int max_attempts_ = 100000;
};

}  // namespace latcap
