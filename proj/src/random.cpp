#include "tethersim/random.hpp"

#include <cmath>

namespace tethersim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(splitmix64(master) ^ tag) ^ index);
}

double RandomStream::rayleigh(double scale)
{
    // 1 - u lies in (0, 1], so the log is finite.
    return scale * std::sqrt(-2.0 * std::log(1.0 - uniform()));
}

}  // namespace tethersim
