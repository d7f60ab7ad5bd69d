#pragma once

#include <cstdint>

namespace copra {

// SplitMix64. Every randomized routine in the library draws through this
// generator, with doubles built directly from the high bits, so that results
// are bit-identical across platforms and standard libraries
// (std::uniform_real_distribution is implementation-defined).
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n). Modulo bias is < n/2^64, irrelevant at our sizes.
    uint64_t below(uint64_t n) { return next() % n; }
};

// Seed of an independent substream: base xor the stream labels, passed once
// through SplitMix64 so adjacent labels do not give adjacent streams.
inline uint64_t derive_seed(uint64_t base, uint64_t label_a, uint64_t label_b = 0) {
    SplitMix64 g(base ^ label_a ^ label_b);
    (void)g.next();
    return g.next();
}

}  // namespace copra
