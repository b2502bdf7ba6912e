#include "latcap/shape.hpp"

#include <cmath>

#include "latcap/errors.hpp"

namespace latcap {

namespace {

using i128 = __int128;

// |x|^2 * den^2 <= (num*N)^2, i.e. |x| <= (num/den)*N.
bool le_scaled_radius(std::int64_t n2, const Rational& r, std::int64_t N) {
    i128 lhs = i128(n2) * r.den * r.den;
    i128 rn = i128(r.num) * N;
    return lhs <= rn * rn;
}

bool gt_scaled_radius(std::int64_t n2, const Rational& r, std::int64_t N) {
    i128 lhs = i128(n2) * r.den * r.den;
    i128 rn = i128(r.num) * N;
    return lhs > rn * rn;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

ShapeSpec ShapeSpec::ball_shape(int d, Rational radius) {
    ShapeSpec s;
    s.kind = ShapeKind::ball;
    s.dim = d;
    s.radius = radius;
    s.validate();
    return s;
}

ShapeSpec ShapeSpec::box_shape(int d) {
    ShapeSpec s;
    s.kind = ShapeKind::box;
    s.dim = d;
    s.validate();
    return s;
}

ShapeSpec ShapeSpec::annulus_shape(int d, Rational inner, Rational outer) {
    ShapeSpec s;
    s.kind = ShapeKind::annulus;
    s.dim = d;
    s.inner = inner;
    s.outer = outer;
    s.validate();
    return s;
}

ShapeSpec ShapeSpec::union_of_boxes_shape(int d, std::vector<BoxSpec> boxes) {
    ShapeSpec s;
    s.kind = ShapeKind::union_of_boxes;
    s.dim = d;
    s.boxes = std::move(boxes);
    s.validate();
    return s;
}

void ShapeSpec::validate() const {
    if (dim < kMinDim || dim > kMaxDim) throw ConfigError("dimension must be in [3,8]");
    switch (kind) {
        case ShapeKind::ball:
            if (radius.num <= 0) throw ConfigError("ball radius must be positive");
            break;
        case ShapeKind::box:
            break;
        case ShapeKind::annulus:
            if (!(Rational(0, 1) < inner && inner < outer && outer <= Rational(1, 1)))
                throw ConfigError("annulus needs 0 < inner < outer <= 1");
            break;
        case ShapeKind::union_of_boxes:
            if (boxes.empty()) throw ConfigError("union_of_boxes needs at least one box");
            for (const auto& b : boxes) {
                if (b.lo.size() != std::size_t(dim) || b.hi.size() != std::size_t(dim))
                    throw ConfigError("box corner arity mismatch");
                for (int i = 0; i < dim; ++i)
                    if (!(b.lo[std::size_t(i)] < b.hi[std::size_t(i)]) &&
                        !(b.lo[std::size_t(i)] == b.hi[std::size_t(i)]))
                        throw ConfigError("box corner ordering violated");
            }
            break;
    }
}

bool ShapeSpec::contains_scaled(const Point& x, std::int64_t N) const {
    switch (kind) {
        case ShapeKind::ball:
            return le_scaled_radius(norm2(x, dim), radius, N);
        case ShapeKind::box:
            for (int i = 0; i < dim; ++i) {
                std::int64_t two = 2 * std::int64_t(x[i]);
                if (two < -N || two > N) return false;
            }
            return true;
        case ShapeKind::annulus: {
            std::int64_t n2 = norm2(x, dim);
            return gt_scaled_radius(n2, inner, N) && le_scaled_radius(n2, outer, N);
        }
        case ShapeKind::union_of_boxes:
            for (const auto& b : boxes) {
                bool in = true;
                for (int i = 0; i < dim && in; ++i) {
                    // lo <= x_i/N <= hi with exact cross-multiplication
                    i128 xi = i128(x[i]);
                    const Rational& lo = b.lo[std::size_t(i)];
                    const Rational& hi = b.hi[std::size_t(i)];
                    if (i128(lo.num) * N > xi * lo.den) in = false;
                    if (xi * hi.den > i128(hi.num) * N) in = false;
                }
                if (in) return true;
            }
            return false;
    }
    return false;
}

void ShapeSpec::axis_bounds(std::int64_t N, int axis, std::int64_t& lo, std::int64_t& hi) const {
    switch (kind) {
        case ShapeKind::ball: {
            std::int64_t r = floor_div(radius.num * N, radius.den);
            lo = -r;
            hi = r;
            break;
        }
        case ShapeKind::box:
            lo = -(N / 2);
            hi = N / 2;
            break;
        case ShapeKind::annulus: {
            std::int64_t r = floor_div(outer.num * N, outer.den);
            lo = -r;
            hi = r;
            break;
        }
        case ShapeKind::union_of_boxes: {
            bool first = true;
            for (const auto& b : boxes) {
                std::int64_t l = ceil_div(b.lo[std::size_t(axis)].num * N, b.lo[std::size_t(axis)].den);
                std::int64_t h = floor_div(b.hi[std::size_t(axis)].num * N, b.hi[std::size_t(axis)].den);
                if (first || l < lo) lo = l;
                if (first || h > hi) hi = h;
                first = false;
            }
            break;
        }
    }
}

std::string ShapeSpec::str() const {
    switch (kind) {
        case ShapeKind::ball:
            if (radius == Rational(1, 1)) return "ball";
            return "ball(" + radius.str() + ")";
        case ShapeKind::box:
            return "box";
        case ShapeKind::annulus:
            return "annulus(" + inner.str() + "," + outer.str() + ")";
        case ShapeKind::union_of_boxes:
            return "union_of_boxes[" + std::to_string(boxes.size()) + "]";
    }
    return "?";
}

}  // namespace latcap
