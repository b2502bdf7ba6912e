#pragma once

#include <cstdint>
#include <vector>

#include "latcap/point.hpp"

namespace latcap {

// Open-addressing point -> int32 map with linear probing. Walk loops do a
// membership/index query per step, so this stays allocation-free and O(1)
// amortized with a fixed 2x load slack.
class PointMap {
public:
    PointMap() = default;

    void reserve(std::size_t n) {
        std::size_t cap = 16;
        while (cap < 2 * n + 1) cap <<= 1;
        if (cap > keys_.size()) rehash(cap);
    }

    void insert(const Point& p, std::int32_t v) {
        if (2 * (size_ + 1) >= keys_.size()) rehash(keys_.size() ? keys_.size() * 2 : 16);
        std::size_t mask = keys_.size() - 1;
        std::size_t i = PointHash{}(p)&mask;
        while (vals_[i] >= 0) {
            if (keys_[i] == p) {
                vals_[i] = v;
                return;
            }
            i = (i + 1) & mask;
        }
        keys_[i] = p;
        vals_[i] = v;
        ++size_;
    }

    std::int32_t find(const Point& p) const {
        if (keys_.empty()) return -1;
        std::size_t mask = keys_.size() - 1;
        std::size_t i = PointHash{}(p)&mask;
        while (vals_[i] >= 0) {
            if (keys_[i] == p) return vals_[i];
            i = (i + 1) & mask;
        }
        return -1;
    }

    bool contains(const Point& p) const { return find(p) >= 0; }
    std::size_t size() const { return size_; }

private:
    void rehash(std::size_t cap) {
        std::vector<Point> okeys = std::move(keys_);
        std::vector<std::int32_t> ovals = std::move(vals_);
        keys_.assign(cap, Point{});
        vals_.assign(cap, -1);
        size_ = 0;
        for (std::size_t i = 0; i < okeys.size(); ++i)
            if (ovals[i] >= 0) insert(okeys[i], ovals[i]);
    }

    std::vector<Point> keys_;
    std::vector<std::int32_t> vals_;  // -1 marks an empty slot
    std::size_t size_ = 0;
};

}  // namespace latcap
