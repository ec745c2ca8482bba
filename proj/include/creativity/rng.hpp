#pragma once

#include <cstdint>
#include <random>

namespace creativity {

// splitmix64: standard 64-bit finalizer (Steele, Lea, Flood 2014).  Used only
// to derive decorrelated seeds; the draw engine itself is mt19937_64, whose
// output stream is pinned down by the C++ standard, so seeded draws are
// reproducible across platforms and standard libraries.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-mode seed derivation: a pure function of (master, index).  Trial k
// gets derive_seed(master, k), so results do not depend on how trials are
// scheduled across worker threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (splitmix64(index) + 0xd1b54a32d192ed03ULL));
}

// Deterministic random stream.  Conversions from raw engine output to doubles
// and to categorical draws are implemented here rather than through
// std::*_distribution, whose algorithms vary between standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace creativity
