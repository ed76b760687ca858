#pragma once

#include <cstdint>
#include <random>

namespace fri {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seeded deterministic generator: mt19937_64 with an explicit 53-bit uniform
/// mapping so that streams are bit-identical across platforms and compilers
/// (std::uniform_real_distribution makes no such guarantee). Substreams are
/// derived from a root seed and a counter, never by sharing engine state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static Rng derive(std::uint64_t root, std::uint64_t stream) {
        return Rng(root ^ splitmix64(stream * 0x9E3779B97F4A7C15ULL + 0x6A09E667F3BCC909ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace fri
