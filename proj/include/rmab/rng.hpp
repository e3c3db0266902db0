#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rmab {

/// Identifier of the generator algorithm, embedded in run metadata so that
/// logs can be replayed by any implementation of the same generator.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

/**
 * Seeded random stream. All draws are explicit mappings of raw mt19937_64
 * output (never std::*_distribution, whose mappings vary across standard
 * libraries), so a (seed, call sequence) pair replays identically everywhere.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 step, used to derive independent sub-stream seeds from one
/// user-supplied seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace rmab
