#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>

namespace latcap {

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 8;

// Lattice point of Z^d. Coordinates beyond the ambient dimension stay zero, so
// equality and hashing can ignore the dimension.
struct Point {
    std::array<std::int32_t, kMaxDim> c{};

    std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    std::int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Point& a, const Point& b) { return a.c == b.c; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a.c == b.c); }
    // Lexicographic; used for the canonical domain index order.
    friend bool operator<(const Point& a, const Point& b) { return a.c < b.c; }
};

inline Point origin() { return Point{}; }

inline Point unit(int axis, std::int32_t k = 1) {
    Point p{};
    p[axis] = k;
    return p;
}

inline Point add(const Point& a, const Point& b, int d) {
    Point r = a;
    for (int i = 0; i < d; ++i) r[i] += b[i];
    return r;
}

inline Point sub(const Point& a, const Point& b, int d) {
    Point r = a;
    for (int i = 0; i < d; ++i) r[i] -= b[i];
    return r;
}

inline std::int64_t norm2(const Point& x, int d) {
    std::int64_t s = 0;
    for (int i = 0; i < d; ++i) s += std::int64_t(x[i]) * x[i];
    return s;
}

// The 2d nearest neighbors in a fixed order: +e_1, -e_1, +e_2, -e_2, ...
inline void neighbors(const Point& x, int d, std::array<Point, 2 * kMaxDim>& out) {
    for (int i = 0; i < d; ++i) {
        Point p = x;
        p[i] += 1;
        out[static_cast<std::size_t>(2 * i)] = p;
        p[i] -= 2;
        out[static_cast<std::size_t>(2 * i + 1)] = p;
    }
}

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        std::uint64_t h = 0x2545f4914f6cdd1dULL;
        for (int i = 0; i < kMaxDim; i += 2) {
            std::uint64_t w = (std::uint64_t(std::uint32_t(p[i])) << 32) | std::uint32_t(p[i + 1]);
            h = mix64(h ^ w);
        }
        return static_cast<std::size_t>(h);
    }
};

std::string to_string(const Point& p, int d);

}  // namespace latcap
