#pragma once

#include "tethersim/config.hpp"
#include "tethersim/coverage.hpp"
#include "tethersim/deployment.hpp"
#include "tethersim/placement.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tethersim {

struct SweepSpec {
    std::string variable;  ///< mbs_distance | availability | tether_max | accessibility
    std::vector<double> values;
    std::vector<std::string> scenarios;
    std::size_t replications = 1;

    /// Throws Error(Config) unless values are non-empty and ascending and replications >= 1.
    void validate() const;
};

SweepSpec sweep_spec(const ExperimentConfig& config);

struct ResultRow {
    double sweep_value = 0.0;
    std::string scenario;
    double p_cov = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;
    double tuav_absent_fraction = 0.0;
};

/// Everything computed at one MBS distance of the distance campaign. All coverage
/// figures are on the shared report bank (samples_final); placements use the shared
/// placement bank (samples_per_eval).
struct DistancePoint {
    double distance_m = 0.0;
    PlacementResult uuav_placement;
    PlacementResult tuav_placement;
    CoverageEstimate mbs_only;
    CoverageEstimate uuav_present;
    CoverageEstimate tuav_optimal;
    CoverageEstimate tuav_above_gs;
};

/**
 * Distance campaign building blocks. The hovering region is anchored at the MBS
 * tower top. The reported tUAV-optimal estimate is the better of the refined optimum
 * and the above-GS point on the report bank, so it dominates scenario 3 exactly.
 */
class DistanceCampaign {
public:
    DistanceCampaign(const ExperimentConfig& config, std::size_t workers);

    DistancePoint evaluate(double distance_m, double tether_max_m) const;
    DistancePoint evaluate(double distance_m) const { return evaluate(distance_m, config_.tether_max_m); }

    /// tUAV-optimal report coverage for increasing tether lengths at one distance.
    /// Grids are nested (radial step fixed by the smallest tether) and each search is
    /// warm-started from the previous optimum, so the sequence is non-decreasing.
    std::vector<DistancePoint> tether_chain(double distance_m, std::vector<double> tethers) const;

    const ExperimentConfig& config() const { return config_; }

private:
    ExperimentConfig config_;
    std::size_t workers_;
    std::shared_ptr<const SampleBank> placement_bank_;
    std::shared_ptr<const SampleBank> report_bank_;
};

/// Distance campaign rows (sweep over mbs_distance, availability or tether_max).
std::vector<ResultRow> run_distance_campaign(const ExperimentConfig& config, std::size_t workers = 1);

/// Per (tether, accessibility) aggregate over building replications.
struct AccessibilityCell {
    double tether_m = 0.0;
    double accessibility = 0.0;
    std::uint64_t successes = 0;  ///< summed over replications
    std::uint64_t samples = 0;
    std::uint64_t absent = 0;
    std::vector<double> per_replication;  ///< coverage of each replication
};

struct AccessibilityResult {
    std::vector<AccessibilityCell> cells;  ///< tether-major, accessibility ascending
    CoverageEstimate mbs_only;
    CoverageEstimate uuav_present;
    PlacementResult uuav_placement;
    std::size_t replications = 0;

    const AccessibilityCell& cell(double tether_m, double accessibility) const;
};

AccessibilityResult evaluate_accessibility(const ExperimentConfig& config, std::size_t workers = 1);

/// Rooftop campaign rows: tuav_L<tether> per accessibility, uuav_a<availability> reference rows.
std::vector<ResultRow> rows_from_accessibility(const ExperimentConfig& config, const AccessibilityResult& result);
std::vector<ResultRow> run_rooftop_campaign(const ExperimentConfig& config, std::size_t workers = 1);

/// Dispatches on config.campaign.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config, std::size_t workers = 1);

struct SimulateOutput {
    ResultRow row;
    PlacementResult placement;
};

/// Single scenario: place (or take uav_position_m) and report one row.
SimulateOutput run_simulate(const ExperimentConfig& config, std::size_t workers = 1);

/// Placement only, objective on the placement bank.
PlacementResult run_optimize(const ExperimentConfig& config, std::size_t workers = 1);

/// Replication 0 of the building process at config.accessibility.
BuildingField run_gen_buildings(const ExperimentConfig& config);

/// Anchor used by simulate/optimize for tethered mode: gs_position_m if given,
/// otherwise the MBS tower top raised by the mast.
Point3 default_anchor(const ExperimentConfig& config);

std::string tether_label(double tether_m);
std::string availability_label(double availability);

void sort_rows(std::vector<ResultRow>& rows);

/// `#`-prefixed metadata block: tool version, command and the resolved configuration.
void write_metadata(std::ostream& os, const ExperimentConfig& config, std::string_view command);
void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_placement_csv(std::ostream& os, const PlacementResult& result, std::string_view label);

/// Writes via a temporary file in the same directory and renames it into place, so a
/// failed run never leaves a partial file at `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string version_string();

}  // namespace tethersim
