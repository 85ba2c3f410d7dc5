#pragma once

#include "tethersim/coverage.hpp"
#include "tethersim/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tethersim {

struct GridSize {
    std::size_t n_incl = 10;
    std::size_t n_azim = 24;
    std::size_t n_rad = 4;
};

struct PlacementOptions {
    GridSize grid;
    std::size_t refine_max_evals = 50;
    /// Extra feasible candidates evaluated after the grid (e.g. the optimum found for a
    /// region nested inside this one). Infeasible entries are ignored.
    std::vector<Point3> warm_start;
    std::size_t workers = 1;
};

struct PlacementResult {
    Point3 position;
    double objective = 0.0;  ///< estimated coverage at the position
    std::size_t evaluations = 0;
    std::uint64_t successes = 0;
};

/// Zenith of the region at full tether length (the "directly above the GS" placement).
Point3 above_gs_point(const HoveringRegion& region);

/**
 * Tether-constrained placement.
 *
 * Every region_grid candidate is scored against the same sample bank, the best one
 * (first in grid order on ties) seeds a compass search over (inclination, azimuth,
 * radius) whose steps start at half the grid spacing and halve after an unsuccessful
 * poll. Poll points are projected back into the region and only strictly better
 * points are accepted; the search stops after refine_max_evals extra evaluations.
 */
PlacementResult optimize_tuav(const CoverageEvaluator& evaluator, const HoveringRegion& region,
                              const PlacementOptions& options = {});

PlacementResult optimize_tuav(const Scenario& scenario, const HoveringRegion& region,
                              std::size_t n_samples_per_eval, GridSize grid, std::uint64_t master_seed,
                              std::size_t workers = 1);

/// Best altitude directly above the cluster centre; ties go to the lowest altitude.
PlacementResult place_uuav(const CoverageEvaluator& evaluator, std::span<const double> altitudes,
                           std::size_t workers = 1);

PlacementResult place_uuav(const Scenario& scenario, std::span<const double> altitudes,
                           std::size_t n_samples_per_eval, std::uint64_t master_seed, std::size_t workers = 1);

/// 20, 40, ..., 300 m.
std::vector<double> default_uuav_altitudes();

}  // namespace tethersim
