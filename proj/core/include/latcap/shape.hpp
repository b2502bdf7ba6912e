#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latcap/point.hpp"
#include "latcap/rational.hpp"

namespace latcap {

enum class ShapeKind { ball, box, annulus, union_of_boxes };

struct BoxSpec {
    std::vector<Rational> lo;  // one rational per axis
    std::vector<Rational> hi;
};

// A compact set D in R^d described exactly; the blow-up is
// D_N = { x in Z^d : x/N in D } decided by exact integer arithmetic.
//
//   ball     : |y| <= radius          (radius defaults to 1)
//   box      : -1/2 <= y_i <= 1/2
//   annulus  : inner < |y| <= outer
//   union_of_boxes : any box  lo_i <= y_i <= hi_i
struct ShapeSpec {
    ShapeKind kind = ShapeKind::ball;
    int dim = 3;
    Rational radius{1, 1};   // ball
    Rational inner{0, 1};    // annulus
    Rational outer{1, 1};    // annulus
    std::vector<BoxSpec> boxes;

    static ShapeSpec ball_shape(int d, Rational radius = Rational(1, 1));
    static ShapeSpec box_shape(int d);
    static ShapeSpec annulus_shape(int d, Rational inner, Rational outer);
    static ShapeSpec union_of_boxes_shape(int d, std::vector<BoxSpec> boxes);

    void validate() const;

    // Exact membership of x/N, N >= 1.
    bool contains_scaled(const Point& x, std::int64_t N) const;

    // Conservative per-axis integer bounds for enumeration at scale N.
    void axis_bounds(std::int64_t N, int axis, std::int64_t& lo, std::int64_t& hi) const;

    std::string str() const;  // compact text form, e.g. "ball", "annulus(1/2,1)"
};

}  // namespace latcap
