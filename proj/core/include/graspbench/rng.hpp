#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace graspbench {

// Portable deterministic PRNG used for every seeded operation (splits,
// augmentation selection, synthetic scenes). SplitMix64: state advances by
// the 64-bit golden ratio, output is the murmur-style finalizer. The exact
// algorithm is part of the file-format contract (see docs/formats.md) so
// that splits reproduce across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n). Lemire multiply-shift; n = 0 returns 0.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream for (seed, index) pairs so per-sample work
// stays deterministic regardless of worker count or processing order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 rng(seed ^ (0xA0761D6478BD642FULL + stream * 0xE7037ED1A0B428DBULL));
    return rng.next();
}

// Fisher-Yates, iterating from the back, index drawn with next_below.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        using std::swap;
        swap(values[i - 1], values[j]);
    }
}

}  // namespace graspbench
