#pragma once

#include "tethersim/channel.hpp"
#include "tethersim/deployment.hpp"
#include "tethersim/placement.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tethersim {

/**
 * Flat experiment configuration.
 *
 * The file is a single YAML mapping of scalar or list values. Every physical
 * quantity carries its unit in the key (tether_max_m, density_per_km2, ...).
 * Unknown keys are rejected; keys not present keep the defaults below.
 */
struct ExperimentConfig {
    std::string campaign;  ///< distance_sweep | accessibility_sweep
    std::string uav_mode;  ///< tethered | untethered

    std::uint64_t seed = 1;
    std::size_t samples_per_eval = 10000;
    std::size_t samples_final = 100000;
    std::size_t replications = 200;

    double cluster_radius_m = 100.0;
    double user_height_m = 1.5;
    double mbs_distance_m = 160.0;
    double mbs_height_m = 30.0;

    ChannelParams channel;

    double availability = 0.8;
    double tether_max_m = 120.0;
    double incl_min_deg = 10.0;
    double alt_min_m = 0.0;
    double gs_mast_m = 0.0;
    std::optional<Point3> gs_position_m;
    std::optional<Point3> uav_position_m;

    double density_per_km2 = 500.0;
    double window_side_m = 2000.0;
    double height_scale_m = 20.0;
    double accessibility = 1.0;

    GridSize grid;
    std::size_t refine_max_evals = 50;
    std::vector<double> uuav_altitudes_m = default_uuav_altitudes();

    std::string sweep_variable;  ///< empty: the campaign's natural variable
    std::vector<double> sweep_values;
    std::vector<std::string> scenarios;
    std::vector<double> tether_lengths_m{80.0, 100.0, 120.0};
    std::vector<double> availabilities{0.6, 0.7, 0.8, 0.9, 1.0};
};

enum class Command { Simulate, Sweep, Optimize, GenBuildings };

/// Throws Error(Config) naming the offending key and line.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Fills campaign defaults (sweep variable, values, scenario labels) and checks
/// cross-key constraints for the given command. Throws Error(Config).
void finalize_config(ExperimentConfig& config, Command command);

/// Resolved configuration as ordered key/value text, values printed round-trip exact.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

Scenario make_scenario(const ExperimentConfig& config, double mbs_distance_m);
HoveringRegion make_region(const ExperimentConfig& config, const Point3& anchor, double tether_max_m);

}  // namespace tethersim
