#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gradctl {

// Seeded generator with explicit uniform mapping. std::mt19937_64 is fully
// specified by the standard, and the (x >> 11) * 2^-53 mapping avoids the
// implementation-defined std::uniform_real_distribution, so streams are
// bit-identical across platforms and compilers.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix_u64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stable hash of (base, parts...): order-sensitive, platform-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix_u64(base);
    for (std::uint64_t p : parts)
        h = mix_u64(h ^ mix_u64(p));
    return h;
}

} // namespace gradctl
