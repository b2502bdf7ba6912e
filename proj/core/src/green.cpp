#include "latcap/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "latcap/errors.hpp"
#include "latcap/symmetry.hpp"

namespace latcap {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(std::size_t(n), 0.0);
    w.assign(std::size_t(n), 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[std::size_t(i)] = -z;
        x[std::size_t(n - 1 - i)] = z;
        w[std::size_t(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[std::size_t(n - 1 - i)] = w[std::size_t(i)];
    }
}

void scaled_bessel_i_array(double z, int nmax, std::vector<double>& out) {
    out.assign(std::size_t(nmax) + 1, 0.0);
    if (z <= 0.0) {
        out[0] = 1.0;
        return;
    }
    int start = nmax + int(9.0 * std::sqrt(z)) + 60;
    double up = 0.0;        // u_{n+1}
    double uc = 1e-280;     // u_n
    double sum = 0.0;       // u_0 + 2 sum_{n>=1} u_n, built downward
    for (int n = start; n >= 1; --n) {
        double um = up + (2.0 * n / z) * uc;  // u_{n-1}
        if (n - 1 <= nmax) out[std::size_t(n - 1)] = um;
        sum += 2.0 * uc;
        up = uc;
        uc = um;
        if (uc > 1e260) {
            const double s = 1e-260;
            uc *= s;
            up *= s;
            sum *= s;
            for (auto& v : out) v *= s;
        }
    }
    sum += uc;  // u_0
    const double inv = 1.0 / sum;
    if (nmax >= 0 && std::size_t(nmax) < out.size()) {
        for (auto& v : out) v *= inv;
    }
    // entries above the recurrence start that never got set stay 0 (true value
    // is below double underflow there)
    for (int n = nmax; n >= 0; --n)
        if (n > start) out[std::size_t(n)] = 0.0;
}

double scaled_bessel_i_asymptotic(int n, double z) {
    const double mu = 4.0 * double(n) * double(n);
    double term = 1.0, series = 1.0;
    for (int m = 1; m <= 10; ++m) {
        double odd = 2.0 * m - 1.0;
        term *= -(mu - odd * odd) / (8.0 * m * z);
        series += term;
    }
    return series / std::sqrt(2.0 * 3.14159265358979323846 * z);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double a_d_constant(int d) { return d * std::tgamma(0.5 * d - 1.0) / (2.0 * std::pow(kPi, 0.5 * d)); }

// canonical displacements x1 >= x2 >= ... >= xd >= 0 with |x|^2 <= r0^2
void canon_displacements_rec(int d, int axis, std::int64_t r2_left, std::int32_t max_coord,
                             Point& cur, std::vector<Point>& out) {
    if (axis == d) {
        out.push_back(cur);
        return;
    }
    for (std::int32_t v = 0; v <= max_coord && std::int64_t(v) * v <= r2_left; ++v) {
        cur[axis] = v;
        canon_displacements_rec(d, axis + 1, r2_left - std::int64_t(v) * v, v, cur, out);
    }
    cur[axis] = 0;
}

}  // namespace

GreenTable GreenTable::build(int d, int r0, int order, bool far_correction) {
    if (d < kMinDim || d > kMaxDim) throw ConfigError("green table: dimension must be in [3,8]");
    if (r0 < 2) throw ConfigError("green table: r0 must be >= 2");
    if (order < 8) throw ConfigError("green table: quadrature order must be >= 8");

    GreenTable t;
    t.d_ = d;
    t.r0_ = r0;
    t.order_ = order;
    t.far_correction_ = far_correction;
    t.a_d_ = a_d_constant(d);

    // canonical displacement list, descending coordinates
    {
        Point cur{};
        canon_displacements_rec(d, 0, std::int64_t(r0) * r0, std::int32_t(r0), cur, t.canon_pts_);
        std::sort(t.canon_pts_.begin(), t.canon_pts_.end());
        t.canon_idx_.reserve(t.canon_pts_.size());
        for (std::size_t i = 0; i < t.canon_pts_.size(); ++i)
            t.canon_idx_.insert(t.canon_pts_[i], std::int32_t(i));
    }
    t.values_.assign(t.canon_pts_.size(), 0.0);

    // panel quadrature on [0, T]; T makes the tail series valid: z = t/d >= max(400, 40 r0^2)
    const double T = double(d) * std::max(400.0, 40.0 * double(r0) * double(r0));
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);

    std::vector<double> bess;
    std::vector<double> panel_edges{0.0, 1.0};
    while (panel_edges.back() < T) panel_edges.push_back(std::min(T, panel_edges.back() * 2.0));

    for (std::size_t pe = 0; pe + 1 < panel_edges.size(); ++pe) {
        const double lo = panel_edges[pe], hi = panel_edges[pe + 1];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < order; ++j) {
            const double tt = mid + half * gx[std::size_t(j)];
            const double wt = half * gw[std::size_t(j)];
            scaled_bessel_i_array(tt / d, r0, bess);
            for (std::size_t k = 0; k < t.canon_pts_.size(); ++k) {
                const Point& p = t.canon_pts_[k];
                double prod = wt;
                for (int i = 0; i < d; ++i) prod *= bess[std::size_t(p[i])];
                t.values_[k] += prod;
            }
        }
    }

    // tail int_T^inf via t = T/v^2, v in (0,1]; per-factor asymptotic series
    {
        const int tail_order = std::max(order, 48);
        std::vector<double> vx, vw;
        gauss_legendre(tail_order, vx, vw);
        for (int j = 0; j < tail_order; ++j) {
            const double v = 0.5 + 0.5 * vx[std::size_t(j)];
            const double wt = 0.5 * vw[std::size_t(j)];
            const double tt = T / (v * v);
            const double z = tt / d;
            const double jac = 2.0 * T / (v * v * v);
            bess.assign(std::size_t(r0) + 1, 0.0);
            for (int n = 0; n <= r0; ++n) bess[std::size_t(n)] = scaled_bessel_i_asymptotic(n, z);
            for (std::size_t k = 0; k < t.canon_pts_.size(); ++k) {
                const Point& p = t.canon_pts_[k];
                double prod = wt * jac;
                for (int i = 0; i < d; ++i) prod *= bess[std::size_t(p[i])];
                t.values_[k] += prod;
            }
        }
    }

    t.g0_ = t.values_[std::size_t(t.canon_idx_.find(Point{}))];
    LATCAP_REQUIRE(t.g0_ > 1.0, "g(0) must exceed 1");

    // Calibrate the 1/|x|^2 refinement (beta + gamma * sum x_i^4/|x|^4) by
    // least squares on the overlap band. The band spans a factor 2 in |x|, so
    // a wrong a_d cannot hide inside the decaying correction and the 1% check
    // below still validates the leading constant.
    {
        double s11 = 0, s1u = 0, suu = 0, r1 = 0, ru = 0;
        for (std::size_t k = 0; k < t.canon_pts_.size(); ++k) {
            const std::int64_t n2 = norm2(t.canon_pts_[k], d);
            if (4 * n2 < std::int64_t(r0) * r0 || n2 > std::int64_t(r0) * r0) continue;
            double u4 = 0;
            for (int i = 0; i < d; ++i) {
                const double c = double(t.canon_pts_[k][i]);
                u4 += c * c * c * c;
            }
            u4 /= double(n2) * double(n2);
            const double resid = (t.values_[k] / t.far_field(double(n2)) - 1.0) * double(n2);
            s11 += 1;
            s1u += u4;
            suu += u4 * u4;
            r1 += resid;
            ru += resid * u4;
        }
        const double det = s11 * suu - s1u * s1u;
        if (det > 1e-12) {
            t.beta_ = (suu * r1 - s1u * ru) / det;
            t.gamma_ = (s11 * ru - s1u * r1) / det;
        }
    }

    // overlap band: table vs the far form used beyond r0, within 1%
    double worst = 0;
    for (std::size_t k = 0; k < t.canon_pts_.size(); ++k) {
        const std::int64_t n2 = norm2(t.canon_pts_[k], d);
        if (4 * n2 < std::int64_t(r0) * r0 || n2 > std::int64_t(r0) * r0) continue;
        const double far = t.far_value(t.canon_pts_[k], n2);
        worst = std::max(worst, std::abs(t.values_[k] / far - 1.0));
    }
    if (worst > 0.01)
        throw NumericError("green table overlap band mismatch " + std::to_string(worst) +
                           " > 1% (increase quadrature order)");
    return t;
}

double GreenTable::far_value(const Point& c, std::int64_t n2) const {
    double g = far_field(double(n2));
    if (far_correction_) {
        double u4 = 0;
        for (int i = 0; i < d_; ++i) {
            const double x = double(c[i]);
            u4 += x * x * x * x;
        }
        u4 /= double(n2) * double(n2);
        g *= 1.0 + (beta_ + gamma_ * u4) / double(n2);
    }
    return g;
}

double GreenTable::far_field(double r2) const { return a_d_ * std::pow(r2, 0.5 * (2.0 - d_)); }

double GreenTable::at(const Point& dx) const {
    Point c = canonical_point(dx, d_);
    const std::int64_t n2 = norm2(c, d_);
    if (n2 <= std::int64_t(r0_) * r0_) {
        std::int32_t i = canon_idx_.find(c);
        return values_[std::size_t(i)];
    }
    return far_value(c, n2);
}

namespace {
constexpr char kMagic[4] = {'L', 'G', 'T', '1'};
}

void GreenTable::save(std::ostream& os) const {
    os.write(kMagic, 4);
    std::int32_t hdr[3] = {d_, r0_, order_};
    os.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    os.write(reinterpret_cast<const char*>(&a_d_), sizeof(double));
    os.write(reinterpret_cast<const char*>(&g0_), sizeof(double));
    os.write(reinterpret_cast<const char*>(&beta_), sizeof(double));
    os.write(reinterpret_cast<const char*>(&gamma_), sizeof(double));
    const std::uint8_t fc = far_correction_ ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&fc), sizeof(fc));
    std::uint64_t n = canon_pts_.size();
    os.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (std::size_t i = 0; i < canon_pts_.size(); ++i) {
        std::int16_t c[kMaxDim];
        for (int k = 0; k < kMaxDim; ++k) c[k] = std::int16_t(canon_pts_[i][k]);
        os.write(reinterpret_cast<const char*>(c), sizeof(c));
        os.write(reinterpret_cast<const char*>(&values_[i]), sizeof(double));
    }
}

std::optional<GreenTable> GreenTable::load(std::istream& is, int d, int r0, int order) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return std::nullopt;
    std::int32_t hdr[3];
    if (!is.read(reinterpret_cast<char*>(hdr), sizeof(hdr))) return std::nullopt;
    if (hdr[0] != d || hdr[1] != r0 || hdr[2] != order) return std::nullopt;
    GreenTable t;
    t.d_ = hdr[0];
    t.r0_ = hdr[1];
    t.order_ = hdr[2];
    is.read(reinterpret_cast<char*>(&t.a_d_), sizeof(double));
    is.read(reinterpret_cast<char*>(&t.g0_), sizeof(double));
    is.read(reinterpret_cast<char*>(&t.beta_), sizeof(double));
    is.read(reinterpret_cast<char*>(&t.gamma_), sizeof(double));
    std::uint8_t fc = 0;
    is.read(reinterpret_cast<char*>(&fc), sizeof(fc));
    t.far_correction_ = fc != 0;
    std::uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!is) return std::nullopt;
    t.canon_pts_.resize(n);
    t.values_.resize(n);
    t.canon_idx_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::int16_t c[kMaxDim];
        is.read(reinterpret_cast<char*>(c), sizeof(c));
        is.read(reinterpret_cast<char*>(&t.values_[i]), sizeof(double));
        for (int k = 0; k < kMaxDim; ++k) t.canon_pts_[i][k] = c[k];
        t.canon_idx_.insert(t.canon_pts_[i], std::int32_t(i));
    }
    if (!is) return std::nullopt;
    return t;
}

void GreenTable::save_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write green cache: " + path);
    save(os);
}

std::optional<GreenTable> GreenTable::load_file(const std::string& path, int d, int r0, int order) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    return load(is, d, r0, order);
}

}  // namespace latcap
