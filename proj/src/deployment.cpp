#include "tethersim/deployment.hpp"

#include "tethersim/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace tethersim {

BuildingField BuildingField::with_accessibility(double accessibility) const
{
    BuildingField out = *this;
    for (auto& b : out.buildings) {
        b.accessible = b.access_mark < accessibility;
    }
    return out;
}

void Scenario::validate() const
{
    if (!(cluster.radius > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cluster radius must be positive");
    }
    if (!(mbs_position.z > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "MBS height must be positive");
    }
    channel.validate();
    if (const auto* t = std::get_if<Tethered>(&uav_mode)) {
        t->region.validate();
    } else {
        const double a = std::get<Untethered>(uav_mode).availability;
        if (!(a >= 0.0 && a <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "availability must lie in [0, 1]");
        }
    }
}

Point3 user_from_uniforms(const UserCluster& cluster, double u_radius, double u_angle)
{
    const double r = cluster.radius * std::sqrt(u_radius);
    const double phi = 2.0 * std::numbers::pi * u_angle;
    return {cluster.center.x + r * std::cos(phi), cluster.center.y + r * std::sin(phi), cluster.user_height};
}

std::vector<Point3> sample_users(const UserCluster& cluster, std::size_t n, RandomStream& rng)
{
    std::vector<Point3> users;
    users.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ur = rng.uniform();
        const double ua = rng.uniform();
        users.push_back(user_from_uniforms(cluster, ur, ua));
    }
    return users;
}

BuildingField generate_buildings(const Rect& window, double density_per_km2, double height_scale,
                                 double accessibility, RandomStream& rng)
{
    if (!(density_per_km2 >= 0.0) || !std::isfinite(density_per_km2)) {
        throw Error(ErrorCode::InvalidArgument, "building density must be non-negative");
    }
    if (!(accessibility >= 0.0 && accessibility <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "accessibility must lie in [0, 1]");
    }
    BuildingField field;
    field.window = window;
    field.density_per_km2 = density_per_km2;

    const double mean = density_per_km2 * window.area() / 1e6;
    const auto count = mean > 0.0 ? rng.poisson(mean) : 0;
    field.buildings.reserve(count);
    const double w = window.x_max - window.x_min;
    const double h = window.y_max - window.y_min;
    for (std::uint64_t i = 0; i < count; ++i) {
        Building b;
        b.location = {window.x_min + w * rng.uniform(), window.y_min + h * rng.uniform()};
        b.height = std::clamp(rng.rayleigh(height_scale), kMinBuildingHeight, kMaxBuildingHeight);
        b.access_mark = rng.uniform();
        b.accessible = b.access_mark < accessibility;
        field.buildings.push_back(b);
    }
    return field;
}

const Building& nearest_accessible_rooftop(const BuildingField& field, Point2 target)
{
    const Building* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& b : field.buildings) {
        if (!b.accessible) {
            continue;
        }
        const double d = distance(b.location, target);
        const bool better = d < best_d ||
            (d == best_d && (b.location.x < best->location.x ||
                             (b.location.x == best->location.x && b.location.y < best->location.y)));
        if (better) {
            best = &b;
            best_d = d;
        }
    }
    if (best == nullptr) {
        throw Error(ErrorCode::NoAccessibleRooftop, "no accessible building in the field");
    }
    return *best;
}

Point3 gs_from_building(const Building& b, double mast_height)
{
    return {b.location.x, b.location.y, b.height + mast_height};
}

void write_buildings_csv(std::ostream& os, const BuildingField& field)
{
    os << "x_m,y_m,height_m,accessible\n";
    char line[128];
    for (const auto& b : field.buildings) {
        std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%d\n", b.location.x, b.location.y, b.height,
                      b.accessible ? 1 : 0);
        os << line;
    }
}

}  // namespace tethersim
