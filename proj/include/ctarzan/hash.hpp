#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ctarzan {

// 64-bit FNV-1a. The seed is folded into the offset basis so that distinct
// network epochs produce unrelated ring layouts from the same address set.
inline uint64_t fnv1a64(std::string_view key, uint64_t seed = 0) {
    uint64_t h = 14695981039346656037ULL ^ seed;
    for (unsigned char ch : key) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform draw in [0, n) by rejection sampling. std::uniform_int_distribution
// is implementation-defined, so it cannot be used where byte-stable output
// across toolchains is required.
inline uint64_t bounded_uniform(std::mt19937_64& rng, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

inline double unit_real(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace ctarzan
