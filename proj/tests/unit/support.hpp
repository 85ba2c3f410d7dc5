#pragma once

// Small hand-rolled generators for property tests. Each property draws its cases
// from a fixed seed so failures replay.

#include "tethersim/geometry.hpp"
#include "tethersim/random.hpp"

#include <cmath>
#include <numbers>

namespace tethersim::testing {

struct Gen {
    explicit Gen(std::uint64_t seed) : rng(StreamKey{seed, StreamTag::Test}, 0) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)); }

    Point3 point(double half_width, double z_lo, double z_hi)
    {
        return {uniform(-half_width, half_width), uniform(-half_width, half_width), uniform(z_lo, z_hi)};
    }

    HoveringRegion region()
    {
        HoveringRegion r;
        r.anchor = point(200.0, 0.0, 80.0);
        r.tether_max = uniform(10.0, 200.0);
        r.incl_min = uniform(0.0, std::numbers::pi / 2.0);
        r.alt_min = uniform(0.0, 60.0);
        return r;
    }

    RandomStream rng;
};

}  // namespace tethersim::testing
