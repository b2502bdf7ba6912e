#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "latcap/alias.hpp"
#include "latcap/rng.hpp"
#include "support.hpp"

using namespace latcap;

TEST_CASE("streams are reproducible and distinct") {
    RngStream a = make_stream(12345, StreamTag::walker, 7, 3);
    RngStream b = make_stream(12345, StreamTag::walker, 7, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c = make_stream(12345, StreamTag::walker, 7, 4);
    RngStream d = make_stream(12345, StreamTag::interlace, 7, 3);
    RngStream e = make_stream(12346, StreamTag::walker, 7, 3);
    RngStream base = make_stream(12345, StreamTag::walker, 7, 3);
    std::uint64_t x = base.next_u64();
    CHECK(c.next_u64() != x);
    CHECK(d.next_u64() != x);
    CHECK(e.next_u64() != x);
}

TEST_CASE("uniform moments") {
    RngStream rng = make_stream(1, StreamTag::selftest, 0, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(std::abs(s / n - 0.5) < 0.005);
    CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("below is in range and unbiased-ish") {
    RngStream rng = make_stream(2, StreamTag::selftest, 0, 0);
    std::vector<int> counts(6, 0);
    for (int i = 0; i < 60000; ++i) ++counts[std::size_t(rng.below(6))];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

namespace {
double poisson_chi2(double mean, int n, RngStream& rng) {
    std::map<std::uint64_t, int> counts;
    for (int i = 0; i < n; ++i) ++counts[rng.poisson(mean)];
    // expected from the pmf, pooling the tails
    double chi2 = 0;
    double pk = std::exp(-mean);
    double seen_p = 0;
    int pooled_obs = 0;
    double pooled_exp = 0;
    for (std::uint64_t k = 0; k < 400; ++k) {
        if (k > 0) pk *= mean / double(k);
        double ek = pk * n;
        seen_p += pk;
        int ok = counts.count(k) ? counts[k] : 0;
        if (ek < 8) {
            pooled_obs += ok;
            pooled_exp += ek;
            if (pooled_exp >= 8) {
                chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
                pooled_obs = 0;
                pooled_exp = 0;
            }
            continue;
        }
        chi2 += (ok - ek) * (ok - ek) / ek;
    }
    double tail_exp = (1.0 - seen_p) * n + pooled_exp;
    if (tail_exp > 0.5) {
        int tail_obs = pooled_obs;
        for (auto& [k, c] : counts)
            if (k >= 400) tail_obs += c;
        chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
    }
    return chi2;
}
}  // namespace

TEST_CASE("poisson inversion matches the pmf (mean 5)") {
    RngStream rng = make_stream(3, StreamTag::selftest, 0, 0);
    double chi2 = poisson_chi2(5.0, 50000, rng);
    CHECK(chi2 < testsupport::chi2_quantile(18, testsupport::kZ999));
}

TEST_CASE("poisson transformed rejection matches the pmf (mean 50)") {
    RngStream rng = make_stream(4, StreamTag::selftest, 0, 0);
    double chi2 = poisson_chi2(50.0, 50000, rng);
    CHECK(chi2 < testsupport::chi2_quantile(50, testsupport::kZ999));
}

TEST_CASE("poisson mean/variance at a large mean") {
    RngStream rng = make_stream(5, StreamTag::selftest, 0, 0);
    const double mu = 300.0;
    const int n = 20000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double v = double(rng.poisson(mu));
        s += v;
        s2 += v * v;
    }
    double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::abs(mean - mu) < 4 * std::sqrt(mu / n));
    CHECK(std::abs(var / mu - 1.0) < 0.05);
}

TEST_CASE("normal moments") {
    RngStream rng = make_stream(6, StreamTag::selftest, 0, 0);
    const int n = 100000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        double v = rng.normal();
        s += v;
        s2 += v * v;
        s4 += v * v * v * v;
    }
    CHECK(std::abs(s / n) < 0.02);
    CHECK(std::abs(s2 / n - 1.0) < 0.03);
    CHECK(std::abs(s4 / n - 3.0) < 0.15);
}

TEST_CASE("alias sampler reproduces weights") {
    std::vector<double> w{1.0, 3.0, 0.5, 0.0, 5.5};
    std::vector<double> prob;
    std::vector<std::int32_t> alias;
    build_alias(w, prob, alias);
    RngStream rng = make_stream(7, StreamTag::selftest, 0, 0);
    std::vector<int> counts(w.size(), 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[std::size_t(sample_alias(prob, alias, rng))];
    CHECK(counts[3] == 0);
    const double total = 10.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double expect = w[i] / total;
        CHECK(std::abs(double(counts[i]) / n - expect) < 5.0 * std::sqrt(0.25 / n) + 1e-12);
    }
}
