// Deterministic random number generation.
//
// All randomness in the project flows through Rng so that results are
// reproducible bit-for-bit from a seed, independent of the standard
// library's distribution implementations.

#pragma once

#include <cstdint>
#include <random>

namespace wsim {

namespace detail {
// splitmix64 finalizer, used to derive well-separated child seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t raw() { return engine_(); }

    /// Independent child stream identified by (seed, stream) pair.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(detail::mix64(detail::mix64(seed) ^ detail::mix64(stream + 0x51ed270b1a7dull)));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace wsim
