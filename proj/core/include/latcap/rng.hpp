#pragma once

#include <cmath>
#include <cstdint>

namespace latcap {

// Philox4x32-10 counter-based generator. A stream is (key = master seed,
// counter high = packed stream id, counter low = block index), so replicas get
// provably disjoint streams without coordination:
//   stream id = tag(8 bits) | grid index(20 bits) | replica(36 bits).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : k0_(std::uint32_t(master_seed)), k1_(std::uint32_t(master_seed >> 32)),
          hi_(stream_id) {}

    std::uint64_t next_u64() {
        if (have_ == 0) refill();
        --have_;
        return out_[have_];
    }

    // in [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in {0,...,n-1}, unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    double normal();
    std::uint64_t poisson(double mean);

private:
    void refill();

    std::uint32_t k0_, k1_;
    std::uint64_t hi_;
    std::uint64_t blk_ = 0;
    std::uint64_t out_[2] = {0, 0};
    int have_ = 0;
    bool have_normal_ = false;
    double spare_normal_ = 0.0;
};

// Module tags for stream-id packing (8 bits available).
enum class StreamTag : std::uint64_t {
    walker = 1,
    interlace = 2,
    confined = 3,
    experiments = 4,
    capacity = 5,
    bernoulli = 6,
    pilot = 7,
    selftest = 8,
};

inline std::uint64_t pack_stream(StreamTag tag, std::uint64_t grid_index, std::uint64_t replica) {
    return (static_cast<std::uint64_t>(tag) << 56) | ((grid_index & 0xFFFFFULL) << 36) |
           (replica & 0xFFFFFFFFFULL);
}

inline RngStream make_stream(std::uint64_t master_seed, StreamTag tag, std::uint64_t grid_index,
                             std::uint64_t replica) {
    return RngStream(master_seed, pack_stream(tag, grid_index, replica));
}

}  // namespace latcap
