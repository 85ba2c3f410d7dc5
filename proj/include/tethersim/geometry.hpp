#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace tethersim {

/// Position in meters in a local East-North-Up frame; z is altitude above the ground plane.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

inline double norm(const Point3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/**
 * Set of positions reachable by a tethered UAV: the closed upper half-ball of
 * radius tether_max around the ground-station anchor, cut by a cone of minimum
 * tether inclination and by an absolute altitude floor.
 *
 * The inclination cone stands in for the clearance required around
 * neighbouring rooftops and any safety margin around the tether.
 */
struct HoveringRegion {
    Point3 anchor;
    double tether_max = 120.0;
    double incl_min = deg_to_rad(10.0);
    double alt_min = 0.0;

    /// Throws Error(InvalidArgument) when the invariants do not hold.
    void validate() const;

    /// Altitude floor actually in force: max(anchor.z, alt_min).
    double floor_z() const { return std::max(anchor.z, alt_min); }
};

/// Spherical coordinates of a point relative to a region's anchor.
struct TetherCoords {
    double inclination = 0.0;  ///< radians above the anchor's horizontal plane
    double azimuth = 0.0;      ///< radians, counter-clockwise from +x
    double radius = 0.0;       ///< meters of tether paid out
};

/// arcsin((tx.z - rx.z) / |tx - rx|). Throws Error(DegenerateLink) for coincident points.
double elevation_angle(const Point3& tx, const Point3& rx);

bool region_contains(const HoveringRegion& region, const Point3& p);

Point3 to_point(const HoveringRegion& region, const TetherCoords& c);

/// Clamps coordinates onto the region (inclination into [incl_min, pi/2], radius into
/// (0, tether_max], azimuth wrapped into [0, 2pi)) and lifts the point above the altitude floor.
TetherCoords project(const HoveringRegion& region, TetherCoords c);

/**
 * Deterministic candidate lattice over the region.
 *
 * Inclinations are evenly spaced on [incl_min, pi/2], azimuths on [0, 2pi), radii on
 * (0, tether_max]. The zenith is emitted once per radius. Order is lexicographic in
 * (radius, inclination, azimuth). Points below the altitude floor are dropped.
 */
std::vector<Point3> region_grid(const HoveringRegion& region, std::size_t n_incl, std::size_t n_azim,
                                std::size_t n_rad);

/// Same lattice as region_grid, returned in tether coordinates.
std::vector<TetherCoords> region_grid_coords(const HoveringRegion& region, std::size_t n_incl,
                                             std::size_t n_azim, std::size_t n_rad);

}  // namespace tethersim
