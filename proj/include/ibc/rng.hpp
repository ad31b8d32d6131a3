#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ibc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for replication/restart `indices` under `master`. Independent of
/// the order in which children are evaluated.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> indices) noexcept
{
    std::uint64_t s = mix64(master);
    for (auto i : indices) s = mix64(s ^ mix64(i + 0x632be59bd9b4e019ULL));
    return s;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> indices = {})
{
    return Rng(derive_seed(master, indices));
}

} // namespace ibc
