#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cvboot {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of an independent stream addressed by a path below a master seed,
/// e.g. derive_seed(master, {tag, b, k}) for grid cell (b, k). Streams depend
/// only on the path, never on the order in which they are created.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t part : path)
        h = splitmix64(h ^ splitmix64(part + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(derive_seed(master, path));
}

// Stream tags used by the engine and simulation runner.
namespace stream {
inline constexpr std::uint64_t point_split = 1;
inline constexpr std::uint64_t boot_weights = 2;
inline constexpr std::uint64_t boot_split = 3;
inline constexpr std::uint64_t calibration = 4;
inline constexpr std::uint64_t naive = 5;
inline constexpr std::uint64_t kfold = 6;
inline constexpr std::uint64_t simulation = 7;
inline constexpr std::uint64_t pilot = 8;
} // namespace stream

} // namespace cvboot
