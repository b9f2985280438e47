#pragma once

#include <cstdint>
#include <random>

namespace quedyn {

/// splitmix64 step; used to whiten seed material.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Whitened per-site seed for sequential sampling sites (site = running
/// counter); feeds the seed argument of sampling entry points.
inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = seed ^ (counter * 0xda942042e4dd58b5ull);
    return splitmix64(s);
}

/// Deterministic engine keyed by (seed, stream, index). Every sampling site
/// derives its own engine so results do not depend on call order.
inline std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xd1342543de82ef95ull;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xaf251af3b0f025b5ull;
    std::uint64_t c = splitmix64(s);
    std::seed_seq seq{a, b, c};
    return std::mt19937_64(seq);
}

}  // namespace quedyn
