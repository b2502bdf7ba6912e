#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "latcap/errors.hpp"

namespace latcap {

// Exact rational with int64 numerator/denominator, always reduced, den > 0.
// Shape membership tests multiply these against the blow-up scale, so keeping
// them exact makes domain enumeration platform-independent.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    static Rational parse(std::string_view text);  // "3/20", "0.15", "1"

    double value() const { return double(num) / double(den); }
    std::string str() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
    }
};

inline Rational rational(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

}  // namespace latcap
