#include "tethersim/coverage.hpp"

#include "tethersim/error.hpp"
#include "tethersim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tethersim {

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z)
{
    if (n == 0) {
        return {0.0, 1.0};
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // The exact interval always contains p; the clamp absorbs round-off at p = 0 or 1.
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

CoverageEstimate make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed)
{
    CoverageEstimate e;
    e.successes = successes;
    e.n_samples = n;
    e.p_cov = n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
    const auto ci = wilson_interval(successes, n);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    e.seed = seed;
    return e;
}

SampleBank::SampleBank(const UserCluster& cluster, const ChannelParams& params, std::size_t n, StreamKey key,
                       std::size_t workers)
    : users_(n), uav_(n), mbs_(n), seed_(key.seed), max_user_height_(cluster.user_height)
{
    const std::size_t batches = (n + kBatchSize - 1) / kBatchSize;
    parallel_for(batches, workers, [&](std::size_t b) {
        RandomStream rng(key, b);
        const std::size_t end = std::min(n, (b + 1) * kBatchSize);
        for (std::size_t i = b * kBatchSize; i < end; ++i) {
            const double ur = rng.uniform();
            const double ua = rng.uniform();
            users_[i] = user_from_uniforms(cluster, ur, ua);
            uav_[i] = draw_link_variates(params, rng);
            mbs_[i] = draw_link_variates(params, rng);
        }
    });
}

SampleBank::SampleBank(std::vector<Point3> users, std::vector<LinkVariates> uav, std::vector<LinkVariates> mbs,
                       std::uint64_t seed)
    : users_(std::move(users)), uav_(std::move(uav)), mbs_(std::move(mbs)), seed_(seed)
{
    if (uav_.size() != users_.size() || mbs_.size() != users_.size()) {
        throw Error(ErrorCode::InvalidArgument, "sample bank columns differ in length");
    }
    for (const auto& u : users_) {
        max_user_height_ = std::max(max_user_height_, u.z);
    }
}

namespace {

// Elevation sigmoid on sin(elevation); same expression as los_probability().
inline double los_prob_from_sin(const ChannelParams& c, double sin_el)
{
    const double deg = rad_to_deg(std::asin(std::clamp(sin_el, 0.0, 1.0)));
    return std::clamp(1.0 / (1.0 + c.los_a * std::exp(-c.los_b * (deg - c.los_a))), 0.0, 1.0);
}

}  // namespace

CoverageEvaluator::CoverageEvaluator(const Scenario& scenario, std::shared_ptr<const SampleBank> bank)
    : scenario_(scenario), bank_(std::move(bank))
{
    const auto& c = scenario_.channel;
    c.validate();
    noise_mw_ = dbm_to_mw(c.noise_dbm);
    threshold_ = db_to_linear(c.sinr_threshold_db);
    uav_power_mw_ = dbm_to_mw(c.tx_power_uav_dbm);
    los_excess_ = db_to_linear(-c.eta_los_db);
    nlos_excess_ = db_to_linear(-c.eta_nlos_db);
    const double k = kSpeedOfLight / (4.0 * std::numbers::pi * c.carrier_hz);
    fspl_const_ = k * k;

    los_table_.resize(kLosTableSize + 1);
    for (std::size_t k = 0; k <= kLosTableSize; ++k) {
        los_table_[k] = los_prob_from_sin(c, static_cast<double>(k) / static_cast<double>(kLosTableSize));
    }

    const double mbs_mw = dbm_to_mw(c.tx_power_mbs_dbm);
    const std::size_t n = bank_->size();
    mbs_rx_mw_.resize(n);
    mbs_mean_mw_.resize(n);
    const Point3& mbs = scenario_.mbs_position;
    for (std::size_t i = 0; i < n; ++i) {
        const Point3& u = bank_->user(i);
        const double d2 = (mbs.x - u.x) * (mbs.x - u.x) + (mbs.y - u.y) * (mbs.y - u.y) + (mbs.z - u.z) * (mbs.z - u.z);
        if (!(d2 > 0.0)) {
            throw Error(ErrorCode::DegenerateLink, "user coincides with the MBS");
        }
        const double p = los_prob_from_sin(c, (mbs.z - u.z) / std::sqrt(d2));
        const double g = mbs_mw * fspl_const_ / d2;
        const auto& v = bank_->mbs(i);
        const bool los = v.los_draw < p;
        mbs_rx_mw_[i] = g * (los ? los_excess_ * v.fading_los : nlos_excess_ * v.fading_nlos);
        mbs_mean_mw_[i] = g * (p * los_excess_ + (1.0 - p) * nlos_excess_);
    }
}

double CoverageEvaluator::los_table_lookup(double sin_el) const
{
    const double x = std::clamp(sin_el, 0.0, 1.0) * static_cast<double>(kLosTableSize);
    const std::size_t k = std::min(static_cast<std::size_t>(x), kLosTableSize - 1);
    return los_table_[k] + (x - static_cast<double>(k)) * (los_table_[k + 1] - los_table_[k]);
}

std::uint64_t CoverageEvaluator::count_with_uav(const Point3& uav, std::size_t begin, std::size_t end) const
{
    const auto& c = scenario_.channel;
    const bool co_channel = c.interference_mode == InterferenceMode::CoChannel;
    // Margin on the bound tests so rounding in the mean-power mixture cannot flip them.
    constexpr double kSafe = 1.0 + 1e-12;
    std::uint64_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) {
        const Point3& u = bank_->user(i);
        const double dx = uav.x - u.x;
        const double dy = uav.y - u.y;
        const double dz = uav.z - u.z;
        const double d2 = dx * dx + dy * dy + dz * dz;
        const double g = uav_power_mw_ * fspl_const_ / d2;
        const auto& v = bank_->uav(i);

        if (!co_channel) {
            // Without interference the outcome is often fixed before the LoS state is
            // known: the mean UAV power lies between its NLoS and LoS values.
            const double hi = g * los_excess_;
            const double lo = g * nlos_excess_;
            if (hi * kSafe <= mbs_mean_mw_[i]) {
                hits += (mbs_rx_mw_[i] / noise_mw_ >= threshold_) ? 1 : 0;
                continue;
            }
            if (lo > mbs_mean_mw_[i] * kSafe) {
                const bool ok_los = g * (los_excess_ * v.fading_los) / noise_mw_ >= threshold_;
                const bool ok_nlos = g * (nlos_excess_ * v.fading_nlos) / noise_mw_ >= threshold_;
                if (ok_los == ok_nlos) {
                    hits += ok_los ? 1 : 0;
                    continue;
                }
            }
        }

        const double sin_el = dz / std::sqrt(d2);
        // Fast path: both decisions that depend on p are taken from the interpolated
        // table when they clear its error bound, otherwise from the exact expression.
        // Either way the decisions are those of the exact expression.
        const double pt = los_table_lookup(sin_el);
        const double mean_t = g * (pt * los_excess_ + (1.0 - pt) * nlos_excess_);
        const double mean_margin = g * ((los_excess_ - nlos_excess_) * kLosTableTol + los_excess_ * 1e-12);
        bool los = v.los_draw < pt;
        bool serve_uav = mean_t > mbs_mean_mw_[i];
        if (std::abs(v.los_draw - pt) <= kLosTableTol || std::abs(mean_t - mbs_mean_mw_[i]) <= mean_margin) {
            const double p = los_prob_from_sin(c, sin_el);
            los = v.los_draw < p;
            serve_uav = g * (p * los_excess_ + (1.0 - p) * nlos_excess_) > mbs_mean_mw_[i];
        }
        const double rx_uav = g * (los ? los_excess_ * v.fading_los : nlos_excess_ * v.fading_nlos);

        const double s = serve_uav ? rx_uav : mbs_rx_mw_[i];
        const double interference = serve_uav ? mbs_rx_mw_[i] : rx_uav;
        const double denom = noise_mw_ + (co_channel ? interference : 0.0);
        hits += (s / denom >= threshold_) ? 1 : 0;
    }
    return hits;
}

CoverageEstimate CoverageEvaluator::with_uav(const Point3& uav, std::size_t workers) const
{
    if (!(uav.z > bank_->max_user_height())) {
        throw Error(ErrorCode::DegenerateLink, "UAV altitude must exceed the user height");
    }
    const std::size_t n = bank_->size();
    const std::size_t batches = (n + SampleBank::kBatchSize - 1) / SampleBank::kBatchSize;
    std::vector<std::uint64_t> counts(batches, 0);
    parallel_for(batches, workers, [&](std::size_t b) {
        counts[b] = count_with_uav(uav, b * SampleBank::kBatchSize, std::min(n, (b + 1) * SampleBank::kBatchSize));
    });
    std::uint64_t hits = 0;
    for (auto h : counts) {
        hits += h;
    }
    return make_estimate(hits, n, bank_->seed());
}

CoverageEstimate CoverageEvaluator::mbs_only() const
{
    std::uint64_t hits = 0;
    for (double rx : mbs_rx_mw_) {
        hits += (rx / noise_mw_ >= threshold_) ? 1 : 0;
    }
    return make_estimate(hits, mbs_rx_mw_.size(), bank_->seed());
}

CoverageEstimate coverage_given_uav(const Scenario& scenario, const Point3& uav_position, std::size_t n_samples,
                                    StreamKey key, std::size_t workers)
{
    if (n_samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
    }
    auto bank = std::make_shared<const SampleBank>(scenario.cluster, scenario.channel, n_samples, key, workers);
    return CoverageEvaluator(scenario, std::move(bank)).with_uav(uav_position, workers);
}

CoverageEstimate coverage_mbs_only(const Scenario& scenario, std::size_t n_samples, StreamKey key,
                                   std::size_t workers)
{
    if (n_samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
    }
    auto bank = std::make_shared<const SampleBank>(scenario.cluster, scenario.channel, n_samples, key, workers);
    return CoverageEvaluator(scenario, std::move(bank)).mbs_only();
}

double coverage_with_availability(const CoverageEstimate& present, const CoverageEstimate& absent,
                                  double availability)
{
    if (!(availability >= 0.0 && availability <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "availability must lie in [0, 1]");
    }
    return availability * present.p_cov + (1.0 - availability) * absent.p_cov;
}

CoverageEstimate mix_estimates(const CoverageEstimate& present, const CoverageEstimate& absent,
                               double availability)
{
    CoverageEstimate e;
    e.p_cov = coverage_with_availability(present, absent, availability);
    e.ci_low = std::min(e.p_cov, availability * present.ci_low + (1.0 - availability) * absent.ci_low);
    e.ci_high = std::max(e.p_cov, availability * present.ci_high + (1.0 - availability) * absent.ci_high);
    e.n_samples = std::max(present.n_samples, absent.n_samples);
    e.successes = static_cast<std::uint64_t>(std::llround(e.p_cov * static_cast<double>(e.n_samples)));
    e.seed = present.seed;
    return e;
}

}  // namespace tethersim
