#include "latcap/domain.hpp"

#include <algorithm>
#include <cmath>

#include "latcap/errors.hpp"

namespace latcap {

namespace {

// Depth-first enumeration over the shape's bounding box, emitting points in
// lexicographic order. Prunes ball/annulus axes by the residual radius so
// high-dimensional blow-ups stay proportional to the point count.
void enumerate_rec(const ShapeSpec& shape, std::int64_t N, int axis, Point& cur,
                   std::int64_t norm_acc, std::vector<Point>& out) {
    const int d = shape.dim;
    if (axis == d) {
        if (shape.contains_scaled(cur, N)) out.push_back(cur);
        return;
    }
    std::int64_t lo, hi;
    shape.axis_bounds(N, axis, lo, hi);
    if (shape.kind == ShapeKind::ball || shape.kind == ShapeKind::annulus) {
        const Rational& r = (shape.kind == ShapeKind::ball) ? shape.radius : shape.outer;
        // |x|^2 <= (r*N)^2: residual budget for this axis
        double budget = double(r.num) * double(N) / double(r.den);
        double rem = budget * budget - double(norm_acc);
        if (rem < 0) return;
        std::int64_t w = std::int64_t(std::floor(std::sqrt(rem))) + 1;
        lo = std::max(lo, -w);
        hi = std::min(hi, w);
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
        cur[axis] = std::int32_t(v);
        enumerate_rec(shape, N, axis + 1, cur, norm_acc + v * v, out);
    }
    cur[axis] = 0;
}

}  // namespace

void DomainInstance::finalize() {
    map_.reserve(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) map_.insert(pts_[i], std::int32_t(i));

    boundary_flag_.assign(pts_.size(), 0);
    std::array<Point, 2 * kMaxDim> nbr;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        neighbors(pts_[i], dim_, nbr);
        for (int k = 0; k < 2 * dim_; ++k) {
            if (!map_.contains(nbr[std::size_t(k)])) {
                boundary_flag_[i] = 1;
                break;
            }
        }
        if (boundary_flag_[i]) boundary_.push_back(std::int32_t(i));
    }

    // centroid, rounded to the lattice
    std::array<double, kMaxDim> mean{};
    for (const Point& p : pts_)
        for (int k = 0; k < dim_; ++k) mean[std::size_t(k)] += p[k];
    for (int k = 0; k < dim_; ++k)
        center_[k] = std::int32_t(std::llround(mean[std::size_t(k)] / double(pts_.size())));
    double h2 = 0;
    for (const Point& p : pts_) h2 = std::max(h2, double(norm2(sub(p, center_, dim_), dim_)));
    hull_radius_ = std::max(0.5, std::sqrt(h2));

    symmetric_ = has_shape_ && (shape_.kind == ShapeKind::ball || shape_.kind == ShapeKind::box ||
                                shape_.kind == ShapeKind::annulus);
}

DomainInstance blow_up(const ShapeSpec& shape, std::int64_t N) {
    shape.validate();
    if (N < 1) throw ConfigError("blow-up scale must be >= 1");
    DomainInstance dom;
    dom.dim_ = shape.dim;
    dom.shape_ = shape;
    dom.has_shape_ = true;
    dom.scale_ = N;
    Point cur{};
    enumerate_rec(shape, N, 0, cur, 0, dom.pts_);
    if (dom.pts_.empty())
        throw NumericError("blow_up produced an empty domain (shape too thin at N=" +
                           std::to_string(N) + ")");
    dom.finalize();
    return dom;
}

DomainInstance shrink(const DomainInstance& domain, const Rational& r) {
    const ShapeSpec* s = domain.shape();
    if (s == nullptr || s->kind != ShapeKind::ball)
        throw ConfigError("shrink requires a ball-shaped domain");
    if (!(Rational(0, 1) < r) || !(r < Rational(1, 1)))
        throw ConfigError("shrink factor must lie in (0,1)");
    Rational rr(s->radius.num * r.num, s->radius.den * r.den);
    return blow_up(ShapeSpec::ball_shape(domain.dim(), rr), domain.scale());
}

DomainInstance DomainInstance::from_points(std::vector<Point> pts, int d) {
    if (d < kMinDim || d > kMaxDim) throw ConfigError("dimension must be in [3,8]");
    if (pts.empty()) throw NumericError("domain from empty point set");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    DomainInstance dom;
    dom.dim_ = d;
    dom.pts_ = std::move(pts);
    dom.finalize();
    return dom;
}

std::vector<Point> inner_boundary_points(const DomainInstance& domain) {
    std::vector<Point> out;
    out.reserve(domain.inner_boundary().size());
    for (std::int32_t i : domain.inner_boundary()) out.push_back(domain.point(i));
    return out;
}

std::string to_string(const Point& p, int d) {
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    s += ")";
    return s;
}

}  // namespace latcap
