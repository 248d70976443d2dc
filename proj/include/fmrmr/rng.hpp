#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace fmrmr {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a sequence of stream tags.
/// Pure function, so tasks can be seeded independently of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = splitmix64(parent);
    for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

/// Stable 64-bit hash of a string (FNV-1a), for using ids as stream tags.
inline std::uint64_t hash_tag(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace fmrmr
