#pragma once

#include "tethersim/channel.hpp"
#include "tethersim/geometry.hpp"
#include "tethersim/random.hpp"

#include <iosfwd>
#include <variant>
#include <vector>

namespace tethersim {

/// Users uniformly distributed on a disk at a common height.
struct UserCluster {
    Point2 center;
    double radius = 100.0;
    double user_height = 1.5;

    Point3 center3() const { return {center.x, center.y, user_height}; }
};

struct Building {
    Point2 location;
    double height = 0.0;
    bool accessible = false;
    /// Uniform mark on [0, 1); the building is accessible at level q iff access_mark < q.
    /// Sharing the mark across levels nests the accessible sets.
    double access_mark = 0.0;
};

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    static Rect centered(Point2 center, double side)
    {
        return {center.x - side / 2.0, center.y - side / 2.0, center.x + side / 2.0, center.y + side / 2.0};
    }
    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool contains(Point2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

struct BuildingField {
    Rect window;
    double density_per_km2 = 500.0;
    std::vector<Building> buildings;

    /// Copy with accessibility re-thresholded from the stored marks.
    BuildingField with_accessibility(double accessibility) const;
};

inline constexpr double kMinBuildingHeight = 5.0;
inline constexpr double kMaxBuildingHeight = 100.0;

struct Tethered {
    HoveringRegion region;
};

struct Untethered {
    double availability = 1.0;
};

using UavMode = std::variant<Tethered, Untethered>;

struct Scenario {
    UserCluster cluster;
    Point3 mbs_position{160.0, 0.0, 30.0};
    UavMode uav_mode = Untethered{};
    ChannelParams channel;

    void validate() const;
};

/// Area-uniform points on the cluster disk (radius R sqrt(u)), all at user height.
std::vector<Point3> sample_users(const UserCluster& cluster, std::size_t n, RandomStream& rng);

/// One user drawn from two uniforms; shared by sample_users and the CRN sample bank.
Point3 user_from_uniforms(const UserCluster& cluster, double u_radius, double u_angle);

/**
 * Poisson point process of buildings on the window.
 *
 * Count ~ Poisson(density * area / 1e6); locations uniform; heights Rayleigh(height_scale)
 * clipped to [5, 100] m; accessibility marks Bernoulli(accessibility) through a stored
 * uniform mark per building.
 */
BuildingField generate_buildings(const Rect& window, double density_per_km2, double height_scale,
                                 double accessibility, RandomStream& rng);

/// Nearest accessible building in the plane; ties go to the smaller x, then y.
/// Throws Error(NoAccessibleRooftop) when none is accessible.
const Building& nearest_accessible_rooftop(const BuildingField& field, Point2 target);

/// Ground station on the rooftop, raised by an optional mast.
Point3 gs_from_building(const Building& b, double mast_height = 0.0);

/// CSV with columns x_m, y_m, height_m, accessible.
void write_buildings_csv(std::ostream& os, const BuildingField& field);

}  // namespace tethersim
