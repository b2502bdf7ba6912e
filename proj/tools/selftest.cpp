#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "latcap/confined.hpp"
#include "latcap/experiments.hpp"
#include "latcap/killed.hpp"
#include "latcap/spectral.hpp"

namespace latcap {

namespace {

struct SelfTest {
    int failures = 0;
    void check(const std::string& name, const std::function<bool()>& fn) {
        bool ok = false;
        std::string note;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        std::printf("[%s] %s%s\n", ok ? "PASS" : "FAIL", name.c_str(), note.c_str());
        if (!ok) ++failures;
    }
};

}  // namespace

int run_selftest() {
    SelfTest st;
    Workspace ws;

    st.check("lattice: unit ball has 7 points (d=3)", [] {
        return blow_up(ShapeSpec::ball_shape(3), 1).size() == 7;
    });
    st.check("lattice: shrink(B_2, 1/2) is the unit ball", [] {
        DomainInstance b2 = blow_up(ShapeSpec::ball_shape(3), 2);
        return shrink(b2, Rational(1, 2)).size() == 7;
    });
    st.check("lattice: singleton is its own boundary", [] {
        DomainInstance s = DomainInstance::from_points({Point{}}, 3);
        return s.inner_boundary().size() == 1;
    });
    st.check("lattice: 2d neighbors in d=5", [] {
        std::array<Point, 2 * kMaxDim> nb;
        neighbors(Point{}, 5, nb);
        return nb[9][4] == -1;
    });

    st.check("green: g(e1) = g(e2) (lattice symmetry)", [&] {
        const GreenTable& g = ws.green(3);
        return g.at(unit(0)) == g.at(unit(1));
    });
    st.check("green: g(x) = g(-x)", [&] {
        const GreenTable& g = ws.green(3);
        Point x{{3, -1, 2}}, mx{{-3, 1, -2}};
        return g.at(x) == g.at(mx);
    });
    st.check("potential: killed green on {0} equals 1", [] {
        DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
        KilledGreenField f = killed_green(s, Point{});
        return std::abs(f.values[0] - 1.0) < 1e-12;
    });
    st.check("potential: killing monotonicity G_B5(0,0) < G_B10(0,0) < g0", [&] {
        DomainPtr b5 = make_domain(blow_up(ShapeSpec::ball_shape(3), 5));
        DomainPtr b10 = make_domain(blow_up(ShapeSpec::ball_shape(3), 10));
        double g5 = killed_green(b5, Point{}).values[std::size_t(b5->index_of(Point{}))];
        double g10 = killed_green(b10, Point{}).values[std::size_t(b10->index_of(Point{}))];
        return g5 < g10 && g10 < ws.green(3).g0();
    });
    st.check("potential: equilibrium residual on B_5 within tolerance", [&] {
        DomainPtr b5 = make_domain(blow_up(ShapeSpec::ball_shape(3), 5));
        return equilibrium_measure(b5, ws.green(3)).residual <= 1e-8;
    });
    st.check("potential: harmonic sampler on {0} returns 0", [&] {
        DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
        EquilibriumProfile prof = equilibrium_measure(s, ws.green(3));
        HarmonicSampler hs(prof);
        RngStream rng(7, 7);
        for (int i = 0; i < 100; ++i)
            if (!(hs.sample(rng) == Point{})) return false;
        return true;
    });

    st.check("walker: srw_range(n=0) is {start}", [] {
        RngStream rng(1, 1);
        Trace tr = srw_range(unit(0, 3), 0, nullptr, 3, rng);
        return tr.visited.size() == 1 && tr.visited[0] == unit(0, 3);
    });
    st.check("confined: q_1(0) = 0 on the singleton", [] {
        DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
        ConfinedSampler cs = ConfinedSampler::build(s, 1);
        return cs.q_t(Point{}) == 0.0;
    });
    st.check("confined: q_1(0) = 1 and q_1(e1) = 1/6 on the unit ball", [] {
        DomainPtr b1 = make_domain(blow_up(ShapeSpec::ball_shape(3), 1));
        ConfinedSampler cs = ConfinedSampler::build(b1, 1);
        return std::abs(cs.q_t(Point{}) - 1.0) < 1e-15 &&
               std::abs(cs.q_t(unit(0)) - 1.0 / 6.0) < 1e-15;
    });
    st.check("confined: sampled paths never leave the domain", [] {
        DomainPtr b2 = make_domain(blow_up(ShapeSpec::ball_shape(3), 2));
        ConfinedSampler cs = ConfinedSampler::build(b2, 64);
        auto batch = cs.sample(Point{}, 4, 11, 0, true);
        for (const auto& path : batch.paths)
            for (const Point& p : path)
                if (!b2->contains(p)) return false;
        return true;
    });

    st.check("spectral: lambda({0}) = 0", [] {
        DomainPtr s = make_domain(DomainInstance::from_points({Point{}}, 3));
        return principal_eigenpair(s).lambda == 0.0;
    });
    st.check("spectral: lambda(B_1) = 1/sqrt(6), lambda2 = 0", [] {
        DomainPtr b1 = make_domain(blow_up(ShapeSpec::ball_shape(3), 1));
        EigenPair p = principal_eigenpair(b1);
        double l2 = second_eigenvalue(p);
        return std::abs(p.lambda - 1.0 / std::sqrt(6.0)) < 1e-10 && std::abs(l2) < 1e-9;
    });
    st.check("spectral: survival surrogate at T=0 is phi/sum phi^2", [] {
        DomainPtr b1 = make_domain(blow_up(ShapeSpec::ball_shape(3), 1));
        EigenPair p = principal_eigenpair(b1);
        double v = survival_spectral(p, Point{}, 0);
        return std::abs(v - p.phi[std::size_t(b1->index_of(Point{}))] / p.phi_sq_sum) < 1e-14;
    });
    st.check("spectral: empty obstacle keeps the whole domain", [] {
        DomainInstance b2 = blow_up(ShapeSpec::ball_shape(3), 2);
        DomainInstance comp = component_around(b2, {}, Point{});
        return comp.size() == b2.size();
    });

    st.check("interlace: u = 0 gives an empty trace", [&] {
        const auto& bundle = ws.bundle(ShapeSpec::ball_shape(3), 3);
        RngStream rng(3, 3);
        InterlacementSample s = sample_interlacement(
            0.0, bundle.domain, *bundle.profile, *bundle.entry, ws.green(3), {}, rng);
        return s.trace.empty() && s.trajectory_count == 0;
    });
    st.check("interlace: bernoulli p=0 empty, p=1 full", [&] {
        const auto& bundle = ws.bundle(ShapeSpec::ball_shape(3), 3);
        RngStream rng(4, 4);
        BernoulliField f0 = sample_bernoulli_field(0.0, bundle.domain, rng);
        BernoulliField f1 = sample_bernoulli_field(1.0, bundle.domain, rng);
        return f0.occupied.empty() && f1.occupied.size() == bundle.domain->size();
    });

    st.check("experiments: theta(3,7)=7, theta(5,10)=100", [] {
        return theta(3, 7) == 7.0 && theta(5, 10) == 100.0;
    });
    st.check("experiments: RI ratio at u=0 is exactly 0", [&] {
        ExperimentConfig ec;
        ec.seed = 5;
        RatioResult r = ratio_ri_direct(ws, ShapeSpec::ball_shape(3), 4, 0.0, 8, ec);
        return r.est.mean == 0.0 && r.est.se == 0.0;
    });
    st.check("experiments: RW ratio at t=0 is cap({0})/cap(B_N)", [&] {
        ExperimentConfig ec;
        ec.seed = 5;
        RatioResult r = ratio_rw(ws, 3, 4, 0, 4, ec);
        const auto& bundle = ws.bundle(ShapeSpec::ball_shape(3), 4);
        double expect = (1.0 / ws.green(3).g0()) / bundle.cap;
        return std::abs(r.est.mean - expect) < 1e-9;
    });

    std::printf("%s (%d failures)\n", st.failures == 0 ? "selftest OK" : "selftest FAILED",
                st.failures);
    return st.failures == 0 ? 0 : 5;
}

}  // namespace latcap
