#pragma once

#include <cstdint>
#include <random>

namespace floodnet {

// SplitMix64 finalizer, used both as a bit mixer and to derive child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic child-seed derivation: every graph of a sweep, every batch
// and every flooding instance gets its own seed derived from the master seed
// and its indices, so results are reproducible under any scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t word) {
    return splitmix64(seed ^ splitmix64(word));
}

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t word, Rest... rest) {
    return derive_seed(derive_seed(seed, word), rest...);
}

// Uniform double in [0, 1) from 64 random bits.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) via the multiply-shift reduction. The modulo
// bias on a 64-bit source is below 2^-32 for every n used here.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
    return static_cast<std::uint64_t>(m >> 64);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace floodnet
