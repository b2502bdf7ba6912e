#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "latcap/domain.hpp"
#include "latcap/green.hpp"

namespace testsupport {

// Shared Green tables so the suite builds each dimension once.
inline const latcap::GreenTable& green(int d) {
    static std::map<int, std::unique_ptr<latcap::GreenTable>> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        int r0 = d == 3 ? 36 : (d == 4 ? 20 : (d == 5 ? 16 : 10));
        it = cache.emplace(d, std::make_unique<latcap::GreenTable>(latcap::GreenTable::build(d, r0)))
                 .first;
    }
    return *it->second;
}

inline latcap::DomainPtr ball(int d, std::int64_t N) {
    return latcap::make_domain(latcap::blow_up(latcap::ShapeSpec::ball_shape(d), N));
}

// Wilson-Hilferty chi-square quantile (upper tail p).
inline double chi2_quantile(double nu, double z_upper) {
    const double a = 2.0 / (9.0 * nu);
    const double c = 1.0 - a + z_upper * std::sqrt(a);
    return nu * c * c * c;
}
inline constexpr double kZ999 = 3.090232306167813;  // N(0,1) 0.999 quantile

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d_stat = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        double fa = double(i) / double(a.size());
        double fb = double(j) / double(b.size());
        d_stat = std::max(d_stat, std::abs(fa - fb));
    }
    const double ne = double(a.size()) * double(b.size()) / double(a.size() + b.size());
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d_stat;
    double p = 0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::min(1.0, std::max(0.0, p));
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

inline double se_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double var = 0;
    for (double x : v) var += (x - m) * (x - m);
    return std::sqrt(var / double(v.size() - 1) / double(v.size()));
}

}  // namespace testsupport
