#include <doctest.h>

#include <cmath>
#include <set>

#include "latcap/domain.hpp"
#include "latcap/errors.hpp"
#include "latcap/symmetry.hpp"
#include "support.hpp"

using namespace latcap;

TEST_CASE("blow_up of the unit ball counts") {
    CHECK(blow_up(ShapeSpec::ball_shape(3), 1).size() == 7);
    CHECK(blow_up(ShapeSpec::ball_shape(3), 2).size() == 33);
    CHECK(blow_up(ShapeSpec::ball_shape(3), 3).size() == 123);
}

TEST_CASE("annulus blow-up is the ball difference") {
    DomainInstance ann = blow_up(ShapeSpec::annulus_shape(3, Rational(1, 2), Rational(1, 1)), 2);
    CHECK(ann.size() == 26);
    // matches the two-ball set difference exactly
    DomainInstance b2 = blow_up(ShapeSpec::ball_shape(3), 2);
    DomainInstance b1 = blow_up(ShapeSpec::ball_shape(3), 1);
    std::set<Point> diff;
    for (const Point& p : b2.points())
        if (b1.index_of(p) < 0) diff.insert(p);
    for (const Point& p : ann.points()) CHECK(diff.count(p) == 1);
}

TEST_CASE("blow_up rejects empty results") {
    CHECK_THROWS_AS(blow_up(ShapeSpec::annulus_shape(3, Rational(2, 5), Rational(1, 2)), 2),
                    NumericError);
}

TEST_CASE("shrink agrees with a direct blow-up") {
    DomainInstance b10 = blow_up(ShapeSpec::ball_shape(3), 10);
    DomainInstance half = shrink(b10, Rational(1, 2));
    DomainInstance b5 = blow_up(ShapeSpec::ball_shape(3), 5);
    REQUIRE(half.size() == b5.size());
    for (const Point& p : b5.points()) CHECK(half.index_of(p) >= 0);

    DomainInstance b2 = blow_up(ShapeSpec::ball_shape(3), 2);
    CHECK(shrink(b2, Rational(1, 2)).size() == 7);

    // strict subset sandwich at r = 0.9
    DomainInstance b20 = blow_up(ShapeSpec::ball_shape(3), 20);
    DomainInstance s = shrink(b20, Rational::parse("0.9"));
    DomainInstance b17 = blow_up(ShapeSpec::ball_shape(3), 17);
    CHECK(s.size() < b20.size());
    CHECK(s.size() >= b17.size());
    for (const Point& p : b17.points()) CHECK(s.index_of(p) >= 0);
    for (const Point& p : s.points()) CHECK(b20.index_of(p) >= 0);
}

TEST_CASE("shrink argument validation") {
    DomainInstance b4 = blow_up(ShapeSpec::ball_shape(3), 4);
    CHECK_THROWS_AS(shrink(b4, Rational(3, 2)), ConfigError);
    DomainInstance box = blow_up(ShapeSpec::box_shape(3), 4);
    CHECK_THROWS_AS(shrink(box, Rational(1, 2)), ConfigError);
}

TEST_CASE("inner boundary of small balls") {
    DomainInstance b1 = blow_up(ShapeSpec::ball_shape(3), 1);
    CHECK(b1.inner_boundary().size() == 6);  // all except the center
    CHECK_FALSE(b1.is_inner_boundary(b1.index_of(Point{})));

    DomainInstance b2 = blow_up(ShapeSpec::ball_shape(3), 2);
    CHECK(b2.inner_boundary().size() == 26);

    DomainInstance single = DomainInstance::from_points({Point{}}, 3);
    CHECK(single.inner_boundary().size() == 1);
}

TEST_CASE("boundary points sit in index order and have outside neighbors") {
    DomainInstance b4 = blow_up(ShapeSpec::ball_shape(3), 4);
    std::array<Point, 2 * kMaxDim> nb;
    std::int32_t prev = -1;
    for (std::int32_t i : b4.inner_boundary()) {
        CHECK(i > prev);
        prev = i;
        neighbors(b4.point(i), 3, nb);
        bool outside = false;
        for (int k = 0; k < 6; ++k) outside = outside || b4.index_of(nb[std::size_t(k)]) < 0;
        CHECK(outside);
    }
    // non-boundary points have every neighbor inside
    for (std::size_t i = 0; i < b4.size(); ++i) {
        if (b4.is_inner_boundary(std::int32_t(i))) continue;
        neighbors(b4.point(std::int32_t(i)), 3, nb);
        for (int k = 0; k < 6; ++k) CHECK(b4.index_of(nb[std::size_t(k)]) >= 0);
    }
}

TEST_CASE("neighbors enumerate 2d points in a fixed order") {
    std::array<Point, 2 * kMaxDim> nb;
    neighbors(Point{}, 3, nb);
    CHECK(nb[0] == unit(0, 1));
    CHECK(nb[1] == unit(0, -1));
    CHECK(nb[4] == unit(2, 1));

    neighbors(unit(0), 3, nb);
    CHECK(nb[0] == unit(0, 2));
    CHECK(nb[1] == Point{});

    neighbors(Point{}, 5, nb);
    std::set<Point> uniq(nb.begin(), nb.begin() + 10);
    CHECK(uniq.size() == 10);
}

TEST_CASE("blow_up is monotone in N for star shapes") {
    for (auto shape : {ShapeSpec::ball_shape(3), ShapeSpec::box_shape(3)}) {
        DomainInstance small = blow_up(shape, 6);
        DomainInstance big = blow_up(shape, 9);
        for (const Point& p : small.points()) CHECK(big.index_of(p) >= 0);
    }
}

TEST_CASE("ball volume and surface scaling in d=3") {
    // |B_N| / N^3 near the unit-ball volume for N >= 30
    DomainInstance b30 = blow_up(ShapeSpec::ball_shape(3), 30);
    const double vol = 4.0 * 3.14159265358979 / 3.0;
    CHECK(std::abs(double(b30.size()) / (30.0 * 30.0 * 30.0) / vol - 1.0) < 0.05);

    // |∂B_N| = Θ(N^2): the N^2-normalized count varies by at most 2x
    double lo = 1e300, hi = 0;
    for (std::int64_t N : {10, 16, 22, 28, 34, 40}) {
        DomainInstance b = blow_up(ShapeSpec::ball_shape(3), N);
        double ratio = double(b.inner_boundary().size()) / double(N * N);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo <= 2.0);
}

TEST_CASE("index bijection is contiguous and duplicate-free") {
    DomainInstance b3 = blow_up(ShapeSpec::ball_shape(4), 3);
    std::set<std::int32_t> seen;
    for (std::size_t i = 0; i < b3.size(); ++i) {
        std::int32_t ix = b3.index_of(b3.point(std::int32_t(i)));
        CHECK(ix == std::int32_t(i));
        seen.insert(ix);
    }
    CHECK(seen.size() == b3.size());
}

TEST_CASE("membership via shape matches the point set") {
    DomainInstance ann = blow_up(ShapeSpec::annulus_shape(3, Rational(1, 3), Rational(2, 3)), 9);
    for (const Point& p : ann.points()) CHECK(ann.contains(p));
    CHECK_FALSE(ann.contains(Point{}));  // hole
    Point far{};
    far[0] = 7;
    CHECK_FALSE(ann.contains(far));  // outside: 7 > 6
}

TEST_CASE("union of boxes with rational corners") {
    BoxSpec box1{{Rational(0, 1), Rational(0, 1), Rational(0, 1)},
                 {Rational(1, 2), Rational(1, 2), Rational(1, 2)}};
    BoxSpec box2{{Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)},
                 {Rational(0, 1), Rational(0, 1), Rational(0, 1)}};
    DomainInstance u = blow_up(ShapeSpec::union_of_boxes_shape(3, {box1, box2}), 4);
    CHECK(u.size() == 2 * 27 - 1);  // two 3x3x3 cubes sharing the origin
    CHECK(u.contains(Point{}));
}

TEST_CASE("orbit tables partition symmetric domains") {
    DomainInstance b5 = blow_up(ShapeSpec::ball_shape(3), 5);
    OrbitIndex oi = OrbitIndex::build(b5);
    CHECK(oi.domain_size() == std::int64_t(b5.size()));
    std::int64_t total = 0;
    std::set<Point> all;
    for (std::size_t o = 0; o < oi.orbit_count(); ++o) {
        total += oi.orbit_size(std::int32_t(o));
        for (const Point& p : oi.expand(std::int32_t(o))) {
            CHECK(b5.index_of(p) >= 0);
            CHECK(all.insert(p).second);  // no duplicates across orbits
        }
    }
    CHECK(total == std::int64_t(b5.size()));
    // canonicalization maps members back to their orbit
    for (std::size_t o = 0; o < oi.orbit_count(); ++o)
        for (const Point& p : oi.expand(std::int32_t(o)))
            CHECK(oi.orbit_of(p) == std::int32_t(o));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3/20") == Rational(3, 20));
    CHECK(Rational::parse("0.15") == Rational(3, 20));
    CHECK(Rational::parse("1") == Rational(1, 1));
    CHECK(Rational::parse("0.9") == Rational(9, 10));
    CHECK_THROWS_AS(Rational::parse("x"), ConfigError);
    CHECK_THROWS_AS(Rational(1, 0), ConfigError);
}
