#pragma once

#include "tethersim/geometry.hpp"
#include "tethersim/random.hpp"

#include <span>
#include <string_view>

namespace tethersim {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class InterferenceMode {
    CoChannel,   ///< the non-serving transmitter interferes
    Orthogonal,  ///< UAV and MBS use disjoint bands: pure SNR
};

std::string_view to_string(InterferenceMode mode) noexcept;

/**
 * Air/ground-to-user link model.
 *
 * LoS probability is the elevation sigmoid 1 / (1 + a exp(-b (theta_deg - a))).
 * Path loss is free space plus a state-dependent excess loss. Small-scale fading is
 * Nakagami-m, i.e. a unit-mean Gamma(m, 1/m) power gain.
 *
 * noise_dbm is the floor every link competes against: receiver noise plus the
 * background interference from the surrounding macro layer.
 */
struct ChannelParams {
    double los_a = 9.61;
    double los_b = 0.16;
    double eta_los_db = 1.0;
    double eta_nlos_db = 20.0;
    double carrier_hz = 2.0e9;
    double m_los = 3.0;
    double m_nlos = 1.0;
    double tx_power_uav_dbm = 30.0;
    double tx_power_mbs_dbm = 36.0;
    double noise_dbm = -74.0;
    double sinr_threshold_db = 0.0;
    InterferenceMode interference_mode = InterferenceMode::Orthogonal;

    /// Throws Error(InvalidArgument) when an invariant is violated.
    void validate() const;
};

/// Realized state of one link.
struct LinkSample {
    bool los = false;
    double fading_gain = 1.0;  ///< unit-mean power gain
    double rx_power_dbm = 0.0;
};

/// Uniform LoS draw plus one fading draw per state. Keeping both fading draws lets
/// two candidate transmitters share the same variates even when their LoS states differ.
struct LinkVariates {
    double los_draw = 0.0;
    double fading_los = 1.0;
    double fading_nlos = 1.0;
};

/// Throws Error(InvalidElevation) for negative elevation.
double los_probability(const ChannelParams& params, double elevation_rad);

/// Throws Error(DegenerateLink) for non-positive distance.
double path_loss_db(const ChannelParams& params, double distance_m, bool los);

/// Linear free-space gain (lambda / (4 pi d))^2, without excess loss.
double free_space_gain(const ChannelParams& params, double distance_m);

/// LoS-averaged linear path gain p * g_los + (1 - p) * g_nlos between tx and rx.
double mean_path_gain(const ChannelParams& params, const Point3& tx, const Point3& rx);

LinkVariates draw_link_variates(const ChannelParams& params, RandomStream& rng);

/// Deterministic link realization from pre-drawn variates.
LinkSample realize_link(const ChannelParams& params, const Point3& tx, const Point3& rx, double tx_power_dbm,
                        const LinkVariates& variates);

/// Draws the LoS state from the elevation sigmoid, then a unit-mean Gamma fading gain
/// with the state's shape. Throws Error(DegenerateLink) for coincident points.
LinkSample sample_link(const ChannelParams& params, const Point3& tx, const Point3& rx, double tx_power_dbm,
                       RandomStream& rng);

/// 10 log10(S / (N + sum I)); the interference sum is dropped in orthogonal mode.
double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, const ChannelParams& params);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace tethersim
