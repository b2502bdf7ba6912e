#include "latcap/rng.hpp"

#include "latcap/errors.hpp"

namespace latcap {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
    std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
    std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    std::uint32_t n1 = lo1;
    std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    std::uint32_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
}
}  // namespace

void RngStream::refill() {
    std::uint32_t c[4] = {std::uint32_t(blk_), std::uint32_t(blk_ >> 32), std::uint32_t(hi_),
                          std::uint32_t(hi_ >> 32)};
    std::uint32_t k0 = k0_, k1 = k1_;
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    out_[0] = (std::uint64_t(c[0]) << 32) | c[1];
    out_[1] = (std::uint64_t(c[2]) << 32) | c[3];
    have_ = 2;
    ++blk_;
}

double RngStream::normal() {
    if (have_normal_) {
        have_normal_ = false;
        return spare_normal_;
    }
    // polar method
    for (;;) {
        double u = 2.0 * uniform() - 1.0;
        double v = 2.0 * uniform() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_normal_ = v * f;
            have_normal_ = true;
            return u * f;
        }
    }
}

namespace {

// Sequential inversion; exact for modest means.
std::uint64_t poisson_inversion(double mean, RngStream& rng) {
    double L = std::exp(-mean);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > L);
    return k - 1;
}

double log_factorial(double k) { return std::lgamma(k + 1.0); }

// Hormann's PTRD transformed rejection: exact Poisson using a normal-shaped
// hat, valid for mean >= 10.
std::uint64_t poisson_ptrd(double mu, RngStream& rng) {
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        double u;
        double v = rng.uniform();
        if (v <= 0.86 * vr) {
            u = v / vr - 0.43;
            double us = 0.5 - std::abs(u);
            double k = std::floor((2.0 * a / us + b) * u + mu + 0.445);
            return std::uint64_t(k);
        }
        if (v >= vr) {
            u = rng.uniform() - 0.5;
        } else {
            u = v / vr - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = rng.uniform() * vr;
        }
        double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) continue;
        double k = std::floor((2.0 * a / us + b) * u + mu + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        if (k >= 10.0) {
            if (std::log(v * smu) <= (k + 0.5) * std::log(mu / k) - mu -
                                         std::log(std::sqrt(2 * 3.141592653589793)) + k -
                                         (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k)
                return std::uint64_t(k);
        } else if (k >= 0.0) {
            if (std::log(v) <= k * log_mu - mu - log_factorial(k)) return std::uint64_t(k);
        }
    }
}

}  // namespace

std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0) throw NumericError("poisson mean must be >= 0");
    if (mean == 0) return 0;
    if (mean <= 30.0) return poisson_inversion(mean, *this);
    return poisson_ptrd(mean, *this);
}

}  // namespace latcap
