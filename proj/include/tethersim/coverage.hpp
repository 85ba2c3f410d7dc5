#pragma once

#include "tethersim/channel.hpp"
#include "tethersim/deployment.hpp"
#include "tethersim/random.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace tethersim {

struct CoverageEstimate {
    double p_cov = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t n_samples = 0;
    double ci_low = 0.0;   ///< 95% Wilson bound
    double ci_high = 0.0;  ///< 95% Wilson bound
    std::uint64_t seed = 0;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kZ95);

CoverageEstimate make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed);

/**
 * Common-random-number sample table: one user position plus the LoS and fading
 * variates of both links per sample.
 *
 * Samples are generated in fixed batches of kBatchSize, batch b from sub-stream
 * (key, b), so the table is identical for any worker count. Every candidate UAV
 * position evaluated against the same bank sees the same users and variates.
 */
class SampleBank {
public:
    static constexpr std::size_t kBatchSize = 1024;

    SampleBank(const UserCluster& cluster, const ChannelParams& params, std::size_t n, StreamKey key,
               std::size_t workers = 1);

    /// Bank from explicit samples (fixed user sets, hand-checked instances).
    SampleBank(std::vector<Point3> users, std::vector<LinkVariates> uav, std::vector<LinkVariates> mbs,
               std::uint64_t seed = 0);

    std::size_t size() const { return users_.size(); }
    std::uint64_t seed() const { return seed_; }
    const Point3& user(std::size_t i) const { return users_[i]; }
    const LinkVariates& uav(std::size_t i) const { return uav_[i]; }
    const LinkVariates& mbs(std::size_t i) const { return mbs_[i]; }
    double max_user_height() const { return max_user_height_; }

private:
    std::vector<Point3> users_;
    std::vector<LinkVariates> uav_;
    std::vector<LinkVariates> mbs_;
    std::uint64_t seed_ = 0;
    double max_user_height_ = 0.0;
};

/**
 * Coverage of a scenario against a fixed sample bank.
 *
 * Per sample the user associates with whichever transmitter offers the larger
 * LoS-averaged mean received power (fading excluded; UAV only if strictly larger),
 * the other transmitter is the interferer in co-channel mode, and the sample
 * succeeds iff S / (N + I) >= threshold. The MBS side is precomputed once.
 */
class CoverageEvaluator {
public:
    CoverageEvaluator(const Scenario& scenario, std::shared_ptr<const SampleBank> bank);

    CoverageEstimate with_uav(const Point3& uav, std::size_t workers = 1) const;
    CoverageEstimate mbs_only() const;

    /// Success count over samples [begin, end) with the UAV at `uav`.
    std::uint64_t count_with_uav(const Point3& uav, std::size_t begin, std::size_t end) const;

    /// LoS probability interpolated on sin(elevation); |error| stays far below kLosTableTol.
    double los_table_lookup(double sin_el) const;
    static constexpr std::size_t kLosTableSize = 4096;
    static constexpr double kLosTableTol = 1e-4;

    const Scenario& scenario() const { return scenario_; }
    const SampleBank& bank() const { return *bank_; }
    std::size_t samples() const { return bank_->size(); }

private:
    Scenario scenario_;
    std::shared_ptr<const SampleBank> bank_;
    std::vector<double> mbs_rx_mw_;
    std::vector<double> mbs_mean_mw_;
    std::vector<double> los_table_;
    double noise_mw_ = 0.0;
    double threshold_ = 1.0;
    double uav_power_mw_ = 0.0;
    double los_excess_ = 1.0;
    double nlos_excess_ = 1.0;
    double fspl_const_ = 1.0;
};

/// Builds a bank of n samples from `key` and evaluates the UAV at `uav_position`.
/// Requires uav_position.z above the user height.
CoverageEstimate coverage_given_uav(const Scenario& scenario, const Point3& uav_position, std::size_t n_samples,
                                    StreamKey key, std::size_t workers = 1);

/// MBS as the sole transmitter, no interferer.
CoverageEstimate coverage_mbs_only(const Scenario& scenario, std::size_t n_samples, StreamKey key,
                                   std::size_t workers = 1);

/// availability * present + (1 - availability) * absent.
double coverage_with_availability(const CoverageEstimate& present, const CoverageEstimate& absent,
                                  double availability);

/// Availability mixture as an estimate. The interval is the same mixture of the two
/// component Wilson intervals.
CoverageEstimate mix_estimates(const CoverageEstimate& present, const CoverageEstimate& absent,
                               double availability);

}  // namespace tethersim
