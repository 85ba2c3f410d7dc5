#include "tethersim/channel.hpp"

#include "tethersim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tethersim {

std::string_view to_string(InterferenceMode mode) noexcept
{
    return mode == InterferenceMode::CoChannel ? "co_channel" : "orthogonal";
}

void ChannelParams::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(los_b > 0.0)) fail("los_b must be positive");
    if (!(eta_los_db >= 0.0)) fail("eta_los_db must be non-negative");
    if (!(eta_nlos_db >= eta_los_db)) fail("eta_nlos_db must be at least eta_los_db");
    if (!(carrier_hz > 0.0)) fail("carrier_hz must be positive");
    if (!(m_los >= 0.5) || !(m_nlos >= 0.5)) fail("Nakagami fading orders must be at least 0.5");
    if (std::isnan(tx_power_uav_dbm) || std::isnan(tx_power_mbs_dbm) || std::isnan(noise_dbm) ||
        std::isnan(sinr_threshold_db)) {
        fail("powers and thresholds must not be NaN");
    }
}

double los_probability(const ChannelParams& params, double elevation_rad)
{
    if (elevation_rad < 0.0 || std::isnan(elevation_rad)) {
        throw Error(ErrorCode::InvalidElevation, "elevation " + std::to_string(elevation_rad) + " rad is negative");
    }
    const double deg = rad_to_deg(elevation_rad);
    const double p = 1.0 / (1.0 + params.los_a * std::exp(-params.los_b * (deg - params.los_a)));
    return std::clamp(p, 0.0, 1.0);
}

double free_space_gain(const ChannelParams& params, double distance_m)
{
    const double k = kSpeedOfLight / (4.0 * std::numbers::pi * distance_m * params.carrier_hz);
    return k * k;
}

double path_loss_db(const ChannelParams& params, double distance_m, bool los)
{
    if (!(distance_m > 0.0)) {
        throw Error(ErrorCode::DegenerateLink, "link distance must be positive");
    }
    const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * params.carrier_hz / kSpeedOfLight);
    return fspl + (los ? params.eta_los_db : params.eta_nlos_db);
}

double mean_path_gain(const ChannelParams& params, const Point3& tx, const Point3& rx)
{
    const double p = los_probability(params, std::max(0.0, elevation_angle(tx, rx)));
    const double g = free_space_gain(params, distance(tx, rx));
    return g * (p * db_to_linear(-params.eta_los_db) + (1.0 - p) * db_to_linear(-params.eta_nlos_db));
}

LinkVariates draw_link_variates(const ChannelParams& params, RandomStream& rng)
{
    LinkVariates v;
    v.los_draw = rng.uniform();
    v.fading_los = rng.unit_mean_gamma(params.m_los);
    v.fading_nlos = rng.unit_mean_gamma(params.m_nlos);
    return v;
}

LinkSample realize_link(const ChannelParams& params, const Point3& tx, const Point3& rx, double tx_power_dbm,
                        const LinkVariates& variates)
{
    const double d = distance(tx, rx);
    if (!(d > 0.0)) {
        throw Error(ErrorCode::DegenerateLink, "coincident transmitter and receiver");
    }
    // Links from below the receiver are treated as grazing.
    const double elevation = std::max(0.0, elevation_angle(tx, rx));
    LinkSample s;
    s.los = variates.los_draw < los_probability(params, elevation);
    s.fading_gain = s.los ? variates.fading_los : variates.fading_nlos;
    s.rx_power_dbm = tx_power_dbm - path_loss_db(params, d, s.los) + 10.0 * std::log10(s.fading_gain);
    return s;
}

LinkSample sample_link(const ChannelParams& params, const Point3& tx, const Point3& rx, double tx_power_dbm,
                       RandomStream& rng)
{
    if (!(distance(tx, rx) > 0.0)) {
        throw Error(ErrorCode::DegenerateLink, "coincident transmitter and receiver");
    }
    return realize_link(params, tx, rx, tx_power_dbm, draw_link_variates(params, rng));
}

double sinr_db(const LinkSample& serving, std::span<const LinkSample> interferers, const ChannelParams& params)
{
    double denom = dbm_to_mw(params.noise_dbm);
    if (params.interference_mode == InterferenceMode::CoChannel) {
        for (const auto& i : interferers) {
            denom += dbm_to_mw(i.rx_power_dbm);
        }
    }
    return 10.0 * std::log10(dbm_to_mw(serving.rx_power_dbm) / denom);
}

}  // namespace tethersim
