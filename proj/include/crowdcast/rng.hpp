#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace crowdcast {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a list of keys
/// (agent id, issue frame, stage, sample index, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::int64_t> keys) {
    std::uint64_t h = mix64(base);
    for (std::int64_t k : keys) h = mix64(h ^ static_cast<std::uint64_t>(k));
    return h;
}

/// Seeded 64-bit Mersenne Twister with distribution code that does not
/// depend on the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace crowdcast
