#include <doctest.h>

#include <cmath>
#include <map>

#include "latcap/equilibrium.hpp"
#include "latcap/errors.hpp"
#include "latcap/killed.hpp"
#include "support.hpp"

using namespace latcap;
using testsupport::ball;
using testsupport::green;

TEST_CASE("singleton capacity is the escape probability 1/g0") {
    DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
    EquilibriumProfile prof = equilibrium_measure(s, green(3));
    CHECK(prof.cap == doctest::Approx(1.0 / green(3).g0()).epsilon(1e-12));
    CHECK(prof.e[0] == doctest::Approx(1.0 / green(3).g0()).epsilon(1e-12));
    CHECK(prof.ebar[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("far-separated pair decouples to twice the singleton") {
    Point far = unit(0, 10000);
    DomainPtr k = make_domain(DomainInstance::from_points({Point{}, far}, 3));
    EquilibriumProfile prof = equilibrium_measure(k, green(3));
    const double g0 = green(3).g0();
    CHECK(std::abs(prof.cap - 2.0 / g0) / (2.0 / g0) < 1e-3);
    // exact 2x2 value: cap = 2/(g0 + g(M e1))
    const double exact = 2.0 / (g0 + green(3).at(far));
    CHECK(prof.cap == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("defining system residual on balls") {
    EquilibriumProfile prof = equilibrium_measure(ball(3, 5), green(3));
    CHECK(prof.residual <= 1e-8);
    // weights live on the boundary and are probabilities
    const DomainInstance& K = *prof.support;
    for (std::size_t i = 0; i < K.size(); ++i) {
        if (!K.is_inner_boundary(std::int32_t(i))) CHECK(prof.e[i] == 0.0);
        CHECK(prof.e[i] >= 0.0);
        CHECK(prof.e[i] <= 1.0);
    }
    double ebar_sum = 0;
    for (double v : prof.ebar) ebar_sum += v;
    CHECK(ebar_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orbit-reduced and dense solvers agree on a symmetric ball") {
    // same system solved with and without the symmetry reduction
    DomainPtr b4 = ball(3, 4);
    SolverConfig dense_only;
    dense_only.dense_max = 100000;
    EquilibriumProfile a = equilibrium_measure(b4, green(3));  // orbit path (m=66 > 64)
    DomainPtr b4_pts = make_domain(DomainInstance::from_points(
        std::vector<Point>(b4->points().begin(), b4->points().end()), 3));
    EquilibriumProfile b = equilibrium_measure(b4_pts, green(3), dense_only);  // dense path
    CHECK(a.cap == doctest::Approx(b.cap).epsilon(1e-10));
}

TEST_CASE("capacity is monotone on nested balls") {
    for (int d : {3, 5}) {
        double prev = 0;
        for (std::int64_t N = 2; N <= 8; ++N) {
            EquilibriumProfile prof = equilibrium_measure(ball(d, N), green(d));
            CHECK(prof.cap > prev);
            prev = prof.cap;
        }
    }
}

TEST_CASE("capacity is subadditive on box pairs") {
    RngStream rng = make_stream(99, StreamTag::selftest, 1, 0);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Point> a_pts, b_pts;
        Point offs{};
        for (int i = 0; i < 3; ++i) offs[i] = std::int32_t(rng.below(7)) - 3;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y)
                for (int z = 0; z < 2 + int(rng.below(3)); ++z) {
                    Point p{{x, y, z}};
                    a_pts.push_back(p);
                    b_pts.push_back(add(p, offs, 3));
                }
        std::vector<Point> u_pts = a_pts;
        u_pts.insert(u_pts.end(), b_pts.begin(), b_pts.end());
        double ca = equilibrium_measure(
                        make_domain(DomainInstance::from_points(a_pts, 3)), green(3)).cap;
        double cb = equilibrium_measure(
                        make_domain(DomainInstance::from_points(b_pts, 3)), green(3)).cap;
        double cu = equilibrium_measure(
                        make_domain(DomainInstance::from_points(u_pts, 3)), green(3)).cap;
        CHECK(cu <= ca + cb + 1e-10);
        CHECK(cu >= std::max(ca, cb) - 1e-10);
    }
}

TEST_CASE("blow-up capacity scaling is Cauchy in N (d=3 ball)") {
    double c20 = equilibrium_measure(ball(3, 20), green(3)).cap / 20.0;
    double c40 = equilibrium_measure(ball(3, 40), green(3)).cap / 40.0;
    CHECK(std::abs(c40 / c20 - 1.0) < 0.05);
}

TEST_CASE("capacity difference identity on nested sets") {
    // cap(B) - cap(A) = cap(B) sum_x ebar_B(x) P_x(H_A = infty)
    DomainPtr B = ball(3, 4);  // 257 points
    DomainPtr A = ball(3, 2);
    EquilibriumProfile pb = equilibrium_measure(B, green(3));
    EquilibriumProfile pa = equilibrium_measure(A, green(3));
    double rhs = 0;
    for (std::int32_t bi : B->inner_boundary()) {
        const Point& x = B->point(bi);
        rhs += pb.ebar[std::size_t(bi)] * escape_probability(pa, x, green(3));
    }
    rhs *= pb.cap;
    CHECK(std::abs((pb.cap - pa.cap) - rhs) < 1e-6);

    // a second, less symmetric pair
    std::vector<Point> a_pts;
    for (const Point& p : A->points())
        if (p[0] >= 0) a_pts.push_back(p);
    DomainPtr A2 = make_domain(DomainInstance::from_points(a_pts, 3));
    EquilibriumProfile pa2 = equilibrium_measure(A2, green(3));
    double rhs2 = 0;
    for (std::int32_t bi : B->inner_boundary()) {
        const Point& x = B->point(bi);
        rhs2 += pb.ebar[std::size_t(bi)] * escape_probability(pa2, x, green(3));
    }
    rhs2 *= pb.cap;
    CHECK(std::abs((pb.cap - pa2.cap) - rhs2) < 1e-6);
}

TEST_CASE("hitting probability from afar") {
    DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
    EquilibriumProfile prof = equilibrium_measure(s, green(3));
    // singleton identity g(z)/g0
    CHECK(hitting_probability_far(prof, unit(0, 5), green(3)) ==
          doctest::Approx(green(3).at(unit(0, 5)) / green(3).g0()).epsilon(1e-12));
    // monotone decreasing to 0 along an axis
    double prev = 1.0;
    for (int n = 10; n <= 100; n += 5) {
        double v = hitting_probability_far(prof, unit(0, n), green(3));
        CHECK(v < prev);
        CHECK(v > 0);
        prev = v;
    }
    // far-field form cap * a_d * dist^{2-d} within 10% at 10 diameters
    DomainPtr b4 = ball(3, 4);
    EquilibriumProfile pb = equilibrium_measure(b4, green(3));
    const double dist = 10.0 * b4->diameter();
    Point z = unit(0, std::int32_t(dist));
    double expect = pb.cap * green(3).asymptotic_coefficient() / double(z[0]);
    CHECK(std::abs(hitting_probability_far(pb, z, green(3)) / expect - 1.0) < 0.10);
}

TEST_CASE("harmonic measure sampler matches the weights (chi-square)") {
    DomainPtr b3 = ball(3, 3);
    EquilibriumProfile prof = equilibrium_measure(b3, green(3));
    HarmonicSampler hs(prof);
    RngStream rng = make_stream(17, StreamTag::selftest, 2, 0);
    std::map<std::int32_t, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[b3->index_of(hs.sample(rng))];

    double chi2 = 0;
    int dof = -1;
    for (std::int32_t bi : b3->inner_boundary()) {
        double expect = prof.ebar[std::size_t(bi)] * n;
        REQUIRE(expect > 5);
        double obs = counts.count(bi) ? counts[bi] : 0;
        chi2 += (obs - expect) * (obs - expect) / expect;
        ++dof;
    }
    CHECK(chi2 < testsupport::chi2_quantile(double(dof), testsupport::kZ999));

    // sign-flip symmetry of ebar: counts of x and -x agree within 4 sigma
    for (std::int32_t bi : b3->inner_boundary()) {
        Point mp = b3->point(bi);
        for (int k = 0; k < 3; ++k) mp[k] = -mp[k];
        double cx = counts.count(bi) ? counts[bi] : 0;
        std::int32_t mi = b3->index_of(mp);
        double cm = counts.count(mi) ? counts[mi] : 0;
        CHECK(std::abs(cx - cm) <= 4.0 * std::sqrt(std::max(cx + cm, 1.0)));
    }
}

TEST_CASE("monte carlo capacity: singleton against the closed form") {
    DomainInstance s = DomainInstance::from_points({Point{}}, 3);
    CapacityMcConfig cfg;
    cfg.radius = 200.0;
    cfg.replicas = 64;
    cfg.walks_per_point = 1500;  // 96k walks total
    McEstimate est = capacity_mc(s, green(3), cfg, 2024);
    const double exact = 1.0 / green(3).g0();
    REQUIRE(est.se > 0);
    CHECK(std::abs(est.mean - exact) < 3.0 * est.se);
    CHECK(std::abs(est.mean - exact) / exact < 0.02);
}

TEST_CASE("monte carlo capacity matches the exact solver on balls") {
    for (int d : {3, 5}) {
        DomainPtr b5 = ball(d, 5);
        const double exact = equilibrium_measure(b5, green(d)).cap;
        CapacityMcConfig cfg;
        cfg.replicas = 24;
        cfg.walks_per_point = d == 3 ? 24 : 4;
        McEstimate est = capacity_mc(*b5, green(d), cfg, 77);
        CHECK(std::abs(est.mean - exact) < 3.0 * est.se + 1e-9);
        CHECK(std::abs(est.mean - exact) / exact < 0.02);
    }
}

TEST_CASE("monte carlo capacity validates its stop radius") {
    DomainInstance b3 = blow_up(ShapeSpec::ball_shape(3), 3);
    CapacityMcConfig cfg;
    cfg.radius = 4.0;  // below 2 * diameter
    CHECK_THROWS_AS(capacity_mc(b3, green(3), cfg, 1), ConfigError);
}

TEST_CASE("killed green: symmetry and domination") {
    DomainPtr b6 = ball(3, 6);
    Point x{{2, 1, 0}}, y{{-1, 0, 3}};
    KilledGreenField fx = killed_green(b6, x);
    KilledGreenField fy = killed_green(b6, y);
    CHECK(std::abs(fx.values[std::size_t(b6->index_of(y))] -
                   fy.values[std::size_t(b6->index_of(x))]) < 1e-10);
    // dominated by the free green function pointwise
    for (std::size_t i = 0; i < b6->size(); ++i) {
        const Point d = sub(b6->point(std::int32_t(i)), x, 3);
        CHECK(fx.values[i] <= green(3).at(d) + 1e-10);
    }
}

TEST_CASE("green lower bound in the bulk is stable across R") {
    auto bulk_min = [&](std::int64_t R) {
        DomainPtr b = ball(3, R);
        const ShapeSpec inner = ShapeSpec::ball_shape(3, Rational(4, 5));
        double lo = 1e300;
        // deterministic source sample: center + axis points + a diagonal
        std::vector<Point> sources{Point{}, unit(0, std::int32_t(0.7 * double(R))),
                                   unit(1, -std::int32_t(0.6 * double(R)))};
        Point diag{{std::int32_t(0.4 * double(R)), std::int32_t(0.4 * double(R)),
                    -std::int32_t(0.4 * double(R))}};
        sources.push_back(diag);
        for (const Point& src : sources) {
            KilledGreenField f = killed_green(b, src);
            for (std::size_t i = 0; i < b->size(); ++i)
                if (inner.contains_scaled(b->point(std::int32_t(i)), R))
                    lo = std::min(lo, double(R) * f.values[i]);
        }
        return lo;
    };
    const double m10 = bulk_min(10);
    const double m30 = bulk_min(30);
    CHECK(m10 > 0);
    CHECK(m30 >= 0.5 * m10);
}

TEST_CASE("exit distribution of the unit ball from the center") {
    DomainInstance b1 = blow_up(ShapeSpec::ball_shape(3), 1);
    ExitDistribution ex = exit_distribution(b1, Point{});
    REQUIRE(ex.sites.size() == 18);  // 6 axis (2e_i) + 12 diagonal (e_i +/- e_j)
    std::map<std::int64_t, std::vector<double>> by_norm;
    for (std::size_t i = 0; i < ex.sites.size(); ++i)
        by_norm[norm2(ex.sites[i], 3)].push_back(ex.prob[i]);
    // orbit-uniform, and each diagonal site carries twice an axis site's mass
    for (auto& [n2, probs] : by_norm)
        for (double p : probs) CHECK(p == doctest::Approx(probs.front()).epsilon(1e-12));
    CHECK(by_norm[2].front() == doctest::Approx(2.0 * by_norm[4].front()).epsilon(1e-10));
}

TEST_CASE("exit distribution of a large ball is nearly uniform") {
    DomainInstance b20 = blow_up(ShapeSpec::ball_shape(3), 20);
    ExitDistribution ex = exit_distribution(b20, Point{});
    double lo = 1e300, hi = 0;
    for (double p : ex.prob) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(hi / lo <= 2.0);

    // starts across B_{N/4} stay within a bounded ratio of each other
    double lo_all = lo, hi_all = hi;
    for (Point s : {unit(0, 5), unit(1, -4), Point{{3, 3, -2}}}) {
        ExitDistribution e2 = exit_distribution(b20, s);
        for (double p : e2.prob) {
            lo_all = std::min(lo_all, p);
            hi_all = std::max(hi_all, p);
        }
    }
    CHECK(hi_all / lo_all <= 10.0);
}
