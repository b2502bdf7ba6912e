#include <doctest.h>

#include <cmath>
#include <sstream>

#include "latcap/errors.hpp"
#include "latcap/green.hpp"
#include "support.hpp"

using namespace latcap;

// Frozen high-precision references, computed before the build from the
// Glasser-Zucker closed form (g0, d=3) and 25-digit quadrature of the
// walk's Bessel-product integral.
namespace {
constexpr double kG0_3 = 1.516386059151978;
constexpr double kG0_4 = 1.239467121848482;
constexpr double kG0_5 = 1.156308124840231;
constexpr double kG_110 = 0.331148602126424;
constexpr double kG_111 = 0.261470126386353;
constexpr double kG_200 = 0.257335887254194;
constexpr double kG_312 = 0.126945971807377;
constexpr double kG_500 = 0.096606452003639;
}  // namespace

TEST_CASE("g(0) matches the d=3 oracle to 6+ significant digits") {
    GreenTable g = GreenTable::build(3, 30);
    CHECK(g.g0() == doctest::Approx(kG0_3).epsilon(5e-7));
    // the production table is far tighter
    CHECK(std::abs(testsupport::green(3).g0() - kG0_3) < 1e-12);
}

TEST_CASE("near-field values against the quadrature oracle") {
    const GreenTable& g = testsupport::green(3);
    CHECK(std::abs(g.at(unit(0)) - (kG0_3 - 1.0)) < 1e-12);  // g(e1) = g0 - 1 by harmonicity
    Point p110{{1, 1, 0}}, p111{{1, 1, 1}}, p200{{2, 0, 0}}, p312{{3, -1, 2}}, p500{{5, 0, 0}};
    CHECK(std::abs(g.at(p110) - kG_110) < 1e-12);
    CHECK(std::abs(g.at(p111) - kG_111) < 1e-12);
    CHECK(std::abs(g.at(p200) - kG_200) < 1e-12);
    CHECK(std::abs(g.at(p312) - kG_312) < 1e-12);
    CHECK(std::abs(g.at(p500) / g.g0() - kG_500 / kG0_3) < 1e-12);
}

TEST_CASE("lattice symmetries are exact") {
    const GreenTable& g = testsupport::green(3);
    Point x{{3, -1, 2}}, mx{{-3, 1, -2}}, perm{{-1, 2, 3}};
    CHECK(g.at(x) == g.at(mx));
    CHECK(g.at(x) == g.at(perm));
    CHECK(g.at(unit(0)) == g.at(unit(1)));
    CHECK(g.at(unit(1)) == g.at(unit(2, -1)));
}

TEST_CASE("far field agrees with a_d |x|^{2-d} at distance 50") {
    const GreenTable& g = testsupport::green(3);
    Point x{{50, 0, 0}};
    const double ratio = g.at(x) / (g.asymptotic_coefficient() / 50.0);
    CHECK(ratio > 0.99);
    CHECK(ratio < 1.01);
    // corrected far field reproduces the exact value to ~1e-6
    CHECK(std::abs(g.at(x) / 0.00955025261644798 - 1.0) < 1e-5);
}

TEST_CASE("asymptotic coefficient is the standard constant") {
    CHECK(testsupport::green(3).asymptotic_coefficient() ==
          doctest::Approx(3.0 / (2.0 * 3.14159265358979323846)).epsilon(1e-14));
    CHECK(testsupport::green(4).asymptotic_coefficient() ==
          doctest::Approx(0.202642367284676).epsilon(1e-12));
    CHECK(testsupport::green(5).asymptotic_coefficient() ==
          doctest::Approx(0.126651479552922).epsilon(1e-12));
}

TEST_CASE("higher-dimensional g(0): return probability falls with d") {
    CHECK(std::abs(testsupport::green(4).g0() - kG0_4) < 1e-11);
    const GreenTable& g5 = testsupport::green(5);
    CHECK(std::abs(g5.g0() - kG0_5) < 1e-11);
    CHECK(g5.g0() > 1.0);
    CHECK(g5.g0() < 1.2);
    // the spec's example parameters build cleanly
    GreenTable g5b = GreenTable::build(5, 20);
    CHECK(std::abs(g5b.g0() - kG0_5) < 1e-10);
    CHECK(g5b.at(unit(0)) == g5b.at(unit(3)));
}

TEST_CASE("construction fails loudly on a bad configuration") {
    CHECK_THROWS_AS(GreenTable::build(2, 10), ConfigError);
    CHECK_THROWS_AS(GreenTable::build(3, 1), ConfigError);
    // an order too low to resolve the integrand must trip the overlap check
    CHECK_THROWS_AS(GreenTable::build(3, 30, 8), NumericError);
}

TEST_CASE("monotone decay along an axis") {
    const GreenTable& g = testsupport::green(3);
    double prev = g.g0();
    for (int n = 1; n <= 60; ++n) {
        double v = g.at(unit(0, n));
        CHECK(v < prev);
        CHECK(v > 0);
        prev = v;
    }
}

TEST_CASE("binary cache round-trips and is keyed") {
    GreenTable g = GreenTable::build(3, 8);
    std::stringstream ss;
    g.save(ss);
    auto loaded = GreenTable::load(ss, 3, 8, 24);
    REQUIRE(loaded.has_value());
    CHECK(loaded->g0() == g.g0());
    Point p{{3, 2, 1}};
    CHECK(loaded->at(p) == g.at(p));
    CHECK(loaded->at(unit(0, 20)) == g.at(unit(0, 20)));  // far field incl. calibration

    std::stringstream ss2;
    g.save(ss2);
    CHECK_FALSE(GreenTable::load(ss2, 3, 16, 24).has_value());  // key mismatch
}
