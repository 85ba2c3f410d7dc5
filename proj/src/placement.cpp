#include "tethersim/placement.hpp"

#include "tethersim/error.hpp"
#include "tethersim/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace tethersim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

TetherCoords coords_of(const HoveringRegion& region, const Point3& p)
{
    const Point3 v = p - region.anchor;
    TetherCoords c;
    c.radius = norm(v);
    if (c.radius == 0.0) {
        return {kHalfPi, 0.0, 0.0};
    }
    c.inclination = std::asin(std::clamp(v.z / c.radius, -1.0, 1.0));
    c.azimuth = std::atan2(v.y, v.x);
    if (c.azimuth < 0.0) {
        c.azimuth += 2.0 * std::numbers::pi;
    }
    return c;
}

void check_feasible(const HoveringRegion& region, const Point3& p)
{
    if (!region_contains(region, p)) {
        throw std::logic_error("placement produced a point outside the hovering region");
    }
}

}  // namespace

Point3 above_gs_point(const HoveringRegion& region)
{
    return {region.anchor.x, region.anchor.y, region.anchor.z + region.tether_max};
}

PlacementResult optimize_tuav(const CoverageEvaluator& evaluator, const HoveringRegion& region,
                              const PlacementOptions& options)
{
    region.validate();
    const GridSize& g = options.grid;
    std::vector<Point3> points = region_grid(region, g.n_incl, g.n_azim, g.n_rad);
    // Warm-start points are scored verbatim, not round-tripped through tether coordinates.
    for (const auto& p : options.warm_start) {
        if (region_contains(region, p)) {
            points.push_back(p);
        }
    }
    if (points.empty()) {
        throw Error(ErrorCode::InvalidArgument, "hovering region grid is empty");
    }

    std::vector<std::uint64_t> scores(points.size(), 0);
    const std::size_t n = evaluator.samples();
    parallel_for(points.size(), options.workers,
                 [&](std::size_t i) { scores[i] = evaluator.count_with_uav(points[i], 0, n); });

    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) {
            best = i;
        }
    }

    Point3 best_point = points[best];
    TetherCoords current = coords_of(region, best_point);
    std::uint64_t best_score = scores[best];
    std::size_t evaluations = points.size();

    double step_incl = (kHalfPi - region.incl_min) / static_cast<double>(std::max<std::size_t>(g.n_incl - 1, 1)) / 2.0;
    double step_azim = std::numbers::pi / static_cast<double>(g.n_azim);
    double step_rad = region.tether_max / static_cast<double>(g.n_rad) / 2.0;

    std::size_t extra = 0;
    while (extra < options.refine_max_evals) {
        const std::array<TetherCoords, 6> polls{{
            {current.inclination + step_incl, current.azimuth, current.radius},
            {current.inclination - step_incl, current.azimuth, current.radius},
            {current.inclination, current.azimuth + step_azim, current.radius},
            {current.inclination, current.azimuth - step_azim, current.radius},
            {current.inclination, current.azimuth, current.radius + step_rad},
            {current.inclination, current.azimuth, current.radius - step_rad},
        }};
        bool improved = false;
        TetherCoords next = current;
        Point3 next_point = best_point;
        std::vector<Point3> seen;
        for (const auto& raw : polls) {
            if (extra >= options.refine_max_evals) {
                break;
            }
            const TetherCoords c = project(region, raw);
            const Point3 p = to_point(region, c);
            if (p == best_point || std::find(seen.begin(), seen.end(), p) != seen.end() ||
                !region_contains(region, p)) {
                continue;
            }
            seen.push_back(p);
            const std::uint64_t s = evaluator.count_with_uav(p, 0, n);
            ++extra;
            if (s > best_score) {
                best_score = s;
                next = c;
                next_point = p;
                improved = true;
            }
        }
        if (improved) {
            current = next;
            best_point = next_point;
            continue;
        }
        step_incl /= 2.0;
        step_azim /= 2.0;
        step_rad /= 2.0;
        if (step_rad < 1e-3 && step_incl < 1e-5 && step_azim < 1e-5) {
            break;
        }
    }
    evaluations += extra;

    check_feasible(region, best_point);
    PlacementResult r;
    r.position = best_point;
    r.successes = best_score;
    r.objective = n == 0 ? 0.0 : static_cast<double>(best_score) / static_cast<double>(n);
    r.evaluations = evaluations;
    return r;
}

PlacementResult optimize_tuav(const Scenario& scenario, const HoveringRegion& region,
                              std::size_t n_samples_per_eval, GridSize grid, std::uint64_t master_seed,
                              std::size_t workers)
{
    auto bank = std::make_shared<const SampleBank>(scenario.cluster, scenario.channel, n_samples_per_eval,
                                                   StreamKey{master_seed, StreamTag::Placement}, workers);
    CoverageEvaluator evaluator(scenario, std::move(bank));
    PlacementOptions options;
    options.grid = grid;
    options.workers = workers;
    return optimize_tuav(evaluator, region, options);
}

PlacementResult place_uuav(const CoverageEvaluator& evaluator, std::span<const double> altitudes,
                           std::size_t workers)
{
    if (altitudes.empty()) {
        throw Error(ErrorCode::InvalidArgument, "altitude ladder is empty");
    }
    std::vector<double> ladder(altitudes.begin(), altitudes.end());
    std::sort(ladder.begin(), ladder.end());
    const auto& cluster = evaluator.scenario().cluster;
    for (double a : ladder) {
        if (!(a > cluster.user_height)) {
            throw Error(ErrorCode::InvalidArgument, "uUAV altitudes must exceed the user height");
        }
    }

    const std::size_t n = evaluator.samples();
    std::vector<std::uint64_t> scores(ladder.size(), 0);
    parallel_for(ladder.size(), workers, [&](std::size_t i) {
        scores[i] = evaluator.count_with_uav({cluster.center.x, cluster.center.y, ladder[i]}, 0, n);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) {
            best = i;
        }
    }
    PlacementResult r;
    r.position = {cluster.center.x, cluster.center.y, ladder[best]};
    r.successes = scores[best];
    r.objective = n == 0 ? 0.0 : static_cast<double>(scores[best]) / static_cast<double>(n);
    r.evaluations = ladder.size();
    return r;
}

PlacementResult place_uuav(const Scenario& scenario, std::span<const double> altitudes,
                           std::size_t n_samples_per_eval, std::uint64_t master_seed, std::size_t workers)
{
    auto bank = std::make_shared<const SampleBank>(scenario.cluster, scenario.channel, n_samples_per_eval,
                                                   StreamKey{master_seed, StreamTag::Placement}, workers);
    return place_uuav(CoverageEvaluator(scenario, std::move(bank)), altitudes, workers);
}

std::vector<double> default_uuav_altitudes()
{
    std::vector<double> out;
    for (int a = 20; a <= 300; a += 20) {
        out.push_back(static_cast<double>(a));
    }
    return out;
}

}  // namespace tethersim
