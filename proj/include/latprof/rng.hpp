#pragma once

#include <cmath>
#include <cstdint>

namespace latprof {

// Counter-based generator: a SplitMix64 stream whose starting point is a
// strong mix of (master_seed, stream).  A draw is a pure function of
// (master_seed, stream, draw index), so trials can run in any order on any
// number of threads and always see the same values.
class CounterRng {
  public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : state_(mix(mix(master_seed) ^ mix(stream ^ 0x6C62272E07BB0142ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Strictly inside (0, 1); 53 significant bits.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_unit()); }

    // Uniform on {0, ..., bound-1} via rejection, exactly unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

  private:
    std::uint64_t state_;
};

}  // namespace latprof
