#include "latcap/rational.hpp"

#include <cstdlib>
#include <numeric>

namespace latcap {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw ConfigError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw ConfigError("empty rational");
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        char* end = nullptr;
        std::int64_t n = std::strtoll(s.c_str(), &end, 10);
        if (end != s.c_str() + slash) throw ConfigError("bad rational: " + s);
        std::int64_t d = std::strtoll(s.c_str() + slash + 1, &end, 10);
        if (*end != '\0') throw ConfigError("bad rational: " + s);
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (frac_len > 15) throw ConfigError("decimal too long for exact rational: " + s);
        char* end = nullptr;
        std::int64_t n = std::strtoll(digits.c_str(), &end, 10);
        if (*end != '\0') throw ConfigError("bad rational: " + s);
        std::int64_t d = 1;
        for (std::size_t i = 0; i < frac_len; ++i) d *= 10;
        return Rational(n, d);
    }
    char* end = nullptr;
    std::int64_t n = std::strtoll(s.c_str(), &end, 10);
    if (*end != '\0') throw ConfigError("bad rational: " + s);
    return Rational(n, 1);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace latcap
