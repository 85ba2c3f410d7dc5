#pragma once

#include <cstdint>
#include <random>

namespace tethersim {

/// Purposes a sub-stream can be drawn for. Distinct tags give independent streams
/// from the same master seed.
enum class StreamTag : std::uint64_t {
    Placement = 1,
    Report = 2,
    Buildings = 3,
    Users = 4,
    Links = 5,
    Test = 99,
};

/// Identifies a family of sub-streams: (master seed, purpose). Sub-stream i of the
/// family is a pure function of (seed, tag, i).
struct StreamKey {
    std::uint64_t seed = 1;
    StreamTag tag = StreamTag::Placement;
};

/// SplitMix64 finaliser chained over the three inputs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) noexcept;

/// A single reproducible random stream.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(const StreamKey& key, std::uint64_t index)
        : engine_(derive_seed(key.seed, static_cast<std::uint64_t>(key.tag), index))
    {
    }

    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Gamma(shape, 1/shape): unit mean, Nakagami-m power gain for shape = m.
    double unit_mean_gamma(double shape)
    {
        return std::gamma_distribution<double>(shape, 1.0 / shape)(engine_);
    }

    std::uint64_t poisson(double mean) { return std::poisson_distribution<std::uint64_t>(mean)(engine_); }

    /// Rayleigh(scale) by inversion.
    double rayleigh(double scale);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace tethersim
