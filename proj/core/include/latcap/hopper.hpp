#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <functional>

#include "latcap/flatmap.hpp"
#include "latcap/point.hpp"
#include "latcap/rng.hpp"
#include "latcap/shape.hpp"

namespace latcap {

// Exact exit distribution of the SRW from the center of the ball B(0,r),
// computed once per (d, r) by an orbit-reduced linear solve and sampled via an
// alias table. Jumping straight to the exit site is exact by the strong Markov
// property, which lets walks traverse obstacle-free regions in O(1) per r
// lattice units instead of ~r^2 fine steps.
class BallExitLaw {
public:
    static const BallExitLaw& get(int d, int r);  // process-global cache
    static const std::vector<int>& radii(int d);  // cached radii, ascending

    int radius() const { return r_; }
    const Point& sample(RngStream& rng) const;  // displacement from the center

private:
    BallExitLaw(int d, int r);
    int d_, r_;
    std::vector<Point> sites_;
    std::vector<double> prob_;
    std::vector<std::int32_t> alias_;
};

// Occupancy-grid index over an obstacle point set supporting conservative
// "no obstacle within distance q of z" queries at hop scales.
class CellIndex {
public:
    CellIndex(const std::vector<Point>& pts, int d);

    // A "true" answer is exact; "false" may be pessimistic by a cell diagonal.
    bool dist_greater(const Point& z, double q) const;

private:
    int d_;
    int shift_;  // cell side = 1 << shift_
    PointMap cells_;
};

// Obstacle-aware walker position advance: fine SRW steps near the obstacle
// set, exact ball-exit jumps in free space. Jumps are granted only inside a
// verified obstacle-free ball, so the walk's law on the obstacle set (and on
// everything the caller records at budget < 1) is untouched.
class Hopper {
public:
    // Occupancy-grid certificate for arbitrary point sets.
    Hopper(int d, const CellIndex* obstacles);
    // Analytic certificate: dist_lb(z) <= true distance from z to the set.
    Hopper(int d, std::function<double(const Point&)> dist_lb);

    void advance(Point& z, RngStream& rng);

    // Lower bound on the current distance to the obstacle set. After a move
    // with budget() < 1 the caller must re-check membership of z itself.
    double budget() const { return budget_; }
    void reset_budget() { budget_ = 0; }

private:
    int d_;
    const CellIndex* obstacles_ = nullptr;
    std::function<double(const Point&)> dist_lb_;
    double budget_ = 0;
    std::vector<int> radii_;
};

// Conservative Euclidean distance from z to the blow-up of a centered
// ball/box/annulus at scale N (0 for union-of-boxes: no analytic bound).
double shape_distance_lb(const ShapeSpec& shape, std::int64_t N, const Point& z);

}  // namespace latcap
