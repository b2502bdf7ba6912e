#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latcap/flatmap.hpp"
#include "latcap/point.hpp"

namespace latcap {

// Free Green function g(x) of the simple random walk on Z^d, d in [3,8].
//
// Near field (|x| <= r0): quadrature of the walk's Fourier representation,
// reduced exactly per axis to scaled Bessel factors,
//     g(x) = int_0^inf prod_i e^{-t/d} I_{x_i}(t/d) dt,
// integrated on dyadic panels with Gauss-Legendre nodes plus an asymptotic
// tail. Far field: a_d |x|^{2-d} with the standard constant
// a_d = d Gamma(d/2-1) / (2 pi^{d/2}), cross-validated against the quadrature
// on the overlap band r0/2 <= |x| <= r0 at build time (1% tolerance, else the
// construction fails loudly).
class GreenTable {
public:
    static GreenTable build(int d, int r0, int order = 24, bool far_correction = true);

    int dim() const { return d_; }
    int r0() const { return r0_; }
    int order() const { return order_; }
    double asymptotic_coefficient() const { return a_d_; }
    double g0() const { return g0_; }
    // 1/|x|^2 far-field refinement beta + gamma * sum x_i^4/|x|^4,
    // calibrated on the overlap band at build time.
    double far_beta() const { return beta_; }
    double far_gamma() const { return gamma_; }
    bool far_correction() const { return far_correction_; }

    // g at displacement dx (exact lattice symmetries by canonicalization).
    double at(const Point& dx) const;
    double far_field(double r2) const;  // plain a_d |x|^{2-d}
    double far_value(const Point& canonical, std::int64_t n2) const;

    // Versioned binary cache keyed by (d, r0, order).
    void save(std::ostream& os) const;
    static std::optional<GreenTable> load(std::istream& is, int d, int r0, int order);
    void save_file(const std::string& path) const;
    static std::optional<GreenTable> load_file(const std::string& path, int d, int r0, int order);

private:
    GreenTable() = default;

    int d_ = 3, r0_ = 0, order_ = 0;
    bool far_correction_ = true;
    double a_d_ = 0, g0_ = 0, beta_ = 0, gamma_ = 0;
    PointMap canon_idx_;
    std::vector<Point> canon_pts_;
    std::vector<double> values_;
};

// e^{-z} I_n(z) for n = 0..nmax via Miller's downward recurrence with the
// e^{-z}(I_0 + 2 sum I_n) = 1 normalization.
void scaled_bessel_i_array(double z, int nmax, std::vector<double>& out);

// e^{-z} I_n(z) by the large-z asymptotic series; requires z >= max(400, 40 n^2).
double scaled_bessel_i_asymptotic(int n, double z);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace latcap
