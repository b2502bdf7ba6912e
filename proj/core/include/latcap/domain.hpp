#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "latcap/flatmap.hpp"
#include "latcap/point.hpp"
#include "latcap/rational.hpp"
#include "latcap/shape.hpp"

namespace latcap {

// Finite subset of Z^d with a contiguous index, O(1) membership and a
// precomputed inner boundary (points with >= 1 neighbor outside).
// Immutable after construction; safe for unrestricted concurrent reads.
class DomainInstance {
public:
    int dim() const { return dim_; }
    std::size_t size() const { return pts_.size(); }
    const Point& point(std::int32_t i) const { return pts_[static_cast<std::size_t>(i)]; }
    const std::vector<Point>& points() const { return pts_; }

    // -1 when absent.
    std::int32_t index_of(const Point& p) const { return map_.find(p); }

    bool contains(const Point& p) const {
        if (has_shape_) return shape_.contains_scaled(p, scale_);
        return map_.contains(p);
    }

    bool is_inner_boundary(std::int32_t i) const { return boundary_flag_[static_cast<std::size_t>(i)] != 0; }
    // Indices of inner-boundary points, in index order.
    const std::vector<std::int32_t>& inner_boundary() const { return boundary_; }

    std::int64_t scale() const { return scale_; }
    const ShapeSpec* shape() const { return has_shape_ ? &shape_ : nullptr; }

    // Rounded centroid; the far-field reference point for Green evaluations.
    const Point& center() const { return center_; }
    // max_i |p_i - center| in Euclidean norm, an outer hull radius.
    double hull_radius() const { return hull_radius_; }
    double diameter() const { return 2.0 * hull_radius_; }

    // True when the set is invariant under coordinate permutations and sign
    // flips (centered ball/box/annulus blow-ups). Enables orbit-reduced solvers.
    bool is_symmetric() const { return symmetric_; }

    static DomainInstance from_points(std::vector<Point> pts, int d);
    friend DomainInstance blow_up(const ShapeSpec&, std::int64_t);

private:
    void finalize();

    std::vector<Point> pts_;
    PointMap map_;
    std::vector<std::uint8_t> boundary_flag_;
    std::vector<std::int32_t> boundary_;
    ShapeSpec shape_;
    bool has_shape_ = false;
    bool symmetric_ = false;
    std::int64_t scale_ = 1;
    int dim_ = 3;
    Point center_{};
    double hull_radius_ = 0.0;
};

using DomainPtr = std::shared_ptr<const DomainInstance>;

// D_N = { x : x/N in shape }, enumerated in lexicographic order.
// Throws NumericError when the result is empty (shape too thin for N).
DomainInstance blow_up(const ShapeSpec& shape, std::int64_t N);

// Ball domains only: the blow-up of the same ball at radius r*N, r in (0,1).
DomainInstance shrink(const DomainInstance& domain, const Rational& r);

// The inner-boundary points in index order.
std::vector<Point> inner_boundary_points(const DomainInstance& domain);

inline DomainPtr make_domain(DomainInstance d) {
    return std::make_shared<const DomainInstance>(std::move(d));
}

}  // namespace latcap
