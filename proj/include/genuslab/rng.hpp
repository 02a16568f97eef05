#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace genuslab {

// Deterministic RNG contract "genuslab-rng/1".
//
// Engine: std::mt19937_64 (bit-exact across platforms by the standard).
// Seeding: SplitMix64 over (seed, stream key parts), so campaign tasks get
// independent streams keyed by content, not by scheduling.
// Bounded draws use rejection below instead of std::uniform_int_distribution,
// whose output is implementation-defined and would break byte-identical runs.

inline constexpr const char* kRngContract = "genuslab-rng/1";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Independent stream for a task: key parts are mixed in order.
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t s = splitmix64(seed);
        s = splitmix64(s ^ (a + 0x100000001b3ULL));
        s = splitmix64(s ^ (b + 0x1000193ULL));
        s = splitmix64(s ^ (c + 0x811c9dc5ULL));
        return Rng(s);
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform in [0, n), n >= 1. Masked rejection: expected < 2 draws.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~0ULL >> __builtin_clzll((n - 1) | 1);
        for (;;) {
            std::uint64_t v = engine_() & mask;
            if (v < n) return v;
        }
    }

    int range(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (engine_() & 1ULL) != 0; }

    // Uniform double in [0,1) from the top 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace genuslab
