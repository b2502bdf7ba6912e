#pragma once

#include <cstdint>
#include <vector>

#include "latcap/errors.hpp"
#include "latcap/rng.hpp"

namespace latcap {

// Vose alias method with index-ordered worklists, so construction and
// sampling are deterministic given the rng stream.
inline void build_alias(const std::vector<double>& weights, std::vector<double>& prob,
                        std::vector<std::int32_t>& alias) {
    const std::size_t n = weights.size();
    LATCAP_REQUIRE(n > 0, "alias table needs at least one weight");
    double total = 0;
    for (double w : weights) {
        LATCAP_REQUIRE(w >= 0, "alias weights must be nonnegative");
        total += w;
    }
    LATCAP_REQUIRE(total > 0, "alias weights must not all vanish");
    prob.assign(n, 0.0);
    alias.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * double(n) / total;
    std::vector<std::int32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(std::int32_t(i));
    while (!small.empty() && !large.empty()) {
        std::int32_t s = small.back();
        small.pop_back();
        std::int32_t l = large.back();
        large.pop_back();
        prob[std::size_t(s)] = scaled[std::size_t(s)];
        alias[std::size_t(s)] = l;
        scaled[std::size_t(l)] = (scaled[std::size_t(l)] + scaled[std::size_t(s)]) - 1.0;
        (scaled[std::size_t(l)] < 1.0 ? small : large).push_back(l);
    }
    for (std::int32_t i : large) prob[std::size_t(i)] = 1.0;
    for (std::int32_t i : small) prob[std::size_t(i)] = 1.0;
}

inline std::int32_t sample_alias(const std::vector<double>& prob,
                                 const std::vector<std::int32_t>& alias, RngStream& rng) {
    std::uint64_t i = rng.below(prob.size());
    return rng.uniform() < prob[i] ? std::int32_t(i) : alias[i];
}

}  // namespace latcap
