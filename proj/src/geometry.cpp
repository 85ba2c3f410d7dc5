#include "tethersim/geometry.hpp"

#include "tethersim/error.hpp"

#include <string>

namespace tethersim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Closed boundaries, with slack for trigonometric round-off on grid points.
constexpr double kRelSlack = 1e-9;
constexpr double kAngleSlack = 1e-9;

bool is_zenith(double inclination) { return inclination >= kHalfPi - kAngleSlack; }

}  // namespace

void HoveringRegion::validate() const
{
    if (!std::isfinite(anchor.x) || !std::isfinite(anchor.y) || !std::isfinite(anchor.z)) {
        throw Error(ErrorCode::InvalidArgument, "hovering region anchor must be finite");
    }
    if (anchor.z < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "hovering region anchor below ground");
    }
    if (!(tether_max > 0.0) || !std::isfinite(tether_max)) {
        throw Error(ErrorCode::InvalidArgument, "tether_max must be positive, got " + std::to_string(tether_max));
    }
    // incl_min == pi/2 is tolerated: the region collapses onto the vertical segment.
    if (!(incl_min >= 0.0 && incl_min <= kHalfPi + kAngleSlack)) {
        throw Error(ErrorCode::InvalidArgument, "incl_min must lie in [0, pi/2]");
    }
    if (!std::isfinite(alt_min)) {
        throw Error(ErrorCode::InvalidArgument, "alt_min must be finite");
    }
}

double elevation_angle(const Point3& tx, const Point3& rx)
{
    const double d = distance(tx, rx);
    if (!(d > 0.0)) {
        throw Error(ErrorCode::DegenerateLink, "coincident transmitter and receiver");
    }
    const double s = std::clamp((tx.z - rx.z) / d, -1.0, 1.0);
    return std::asin(s);
}

bool region_contains(const HoveringRegion& region, const Point3& p)
{
    const Point3 v = p - region.anchor;
    const double r = norm(v);
    if (r > region.tether_max * (1.0 + kRelSlack)) {
        return false;
    }
    if (p.z < region.floor_z() - kRelSlack * std::max(1.0, std::abs(region.floor_z()))) {
        return false;
    }
    if (r == 0.0) {
        // The anchor itself: inclination is undefined, treat as on the axis.
        return true;
    }
    const double incl = std::asin(std::clamp(v.z / r, -1.0, 1.0));
    return incl >= region.incl_min - kAngleSlack;
}

Point3 to_point(const HoveringRegion& region, const TetherCoords& c)
{
    if (is_zenith(c.inclination)) {
        return {region.anchor.x, region.anchor.y, region.anchor.z + c.radius};
    }
    const double h = c.radius * std::cos(c.inclination);
    return {region.anchor.x + h * std::cos(c.azimuth), region.anchor.y + h * std::sin(c.azimuth),
            region.anchor.z + c.radius * std::sin(c.inclination)};
}

TetherCoords project(const HoveringRegion& region, TetherCoords c)
{
    const double lo = std::min(region.incl_min, kHalfPi);
    c.inclination = std::clamp(c.inclination, lo, kHalfPi);
    c.radius = std::clamp(c.radius, region.tether_max * 1e-6, region.tether_max);
    c.azimuth = std::fmod(c.azimuth, kTwoPi);
    if (c.azimuth < 0.0) {
        c.azimuth += kTwoPi;
    }
    if (is_zenith(c.inclination)) {
        c.inclination = kHalfPi;
        c.azimuth = 0.0;
    }

    // Lift above an altitude floor that sits higher than the anchor.
    const double need = region.alt_min - region.anchor.z;
    if (need > 0.0) {
        if (c.radius < need) {
            c.radius = std::min(need, region.tether_max);
        }
        if (c.radius * std::sin(c.inclination) < need) {
            c.inclination = std::asin(std::min(1.0, need / c.radius));
        }
    }
    return c;
}

std::vector<TetherCoords> region_grid_coords(const HoveringRegion& region, std::size_t n_incl,
                                             std::size_t n_azim, std::size_t n_rad)
{
    if (n_incl == 0 || n_azim == 0 || n_rad == 0) {
        throw Error(ErrorCode::InvalidArgument, "grid counts must be at least 1");
    }
    std::vector<double> inclinations;
    inclinations.reserve(n_incl);
    for (std::size_t i = 0; i < n_incl; ++i) {
        const double t = n_incl == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_incl - 1);
        inclinations.push_back(region.incl_min + t * (kHalfPi - region.incl_min));
    }

    std::vector<TetherCoords> out;
    out.reserve(n_rad * (n_incl * n_azim + 1));
    for (std::size_t ir = 0; ir < n_rad; ++ir) {
        const double radius = region.tether_max * static_cast<double>(ir + 1) / static_cast<double>(n_rad);
        bool zenith_done = false;
        for (double incl : inclinations) {
            if (is_zenith(incl)) {
                if (!zenith_done) {
                    out.push_back({kHalfPi, 0.0, radius});
                    zenith_done = true;
                }
                continue;
            }
            for (std::size_t ia = 0; ia < n_azim; ++ia) {
                const double az = kTwoPi * static_cast<double>(ia) / static_cast<double>(n_azim);
                out.push_back({incl, az, radius});
            }
        }
    }

    std::erase_if(out, [&](const TetherCoords& c) { return !region_contains(region, to_point(region, c)); });
    return out;
}

std::vector<Point3> region_grid(const HoveringRegion& region, std::size_t n_incl, std::size_t n_azim,
                                std::size_t n_rad)
{
    const auto coords = region_grid_coords(region, n_incl, n_azim, n_rad);
    std::vector<Point3> out;
    out.reserve(coords.size());
    for (const auto& c : coords) {
        out.push_back(to_point(region, c));
    }
    return out;
}

}  // namespace tethersim
