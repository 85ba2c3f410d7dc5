#include "support.hpp"

#include "tethersim/channel.hpp"
#include "tethersim/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace tethersim;
using tethersim::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

ChannelParams spec_params()
{
    ChannelParams p;
    p.tx_power_mbs_dbm = 46.0;
    p.noise_dbm = -100.0;
    p.interference_mode = InterferenceMode::CoChannel;
    return p;
}

LinkSample at_dbm(double dbm)
{
    LinkSample s;
    s.rx_power_dbm = dbm;
    return s;
}

}  // namespace

TEST_CASE("LoS probability at the zenith and at the sigmoid midpoint")
{
    const ChannelParams p;
    // 1 / (1 + 9.61 exp(-0.16 (90 - 9.61)))
    CHECK(los_probability(p, kPi / 2) == doctest::Approx(0.9999746).epsilon(1e-6));
    // exponent vanishes at elevation = a degrees
    CHECK(los_probability(p, deg_to_rad(9.61)) == doctest::Approx(1.0 / 10.61).epsilon(1e-12));
    CHECK(los_probability(p, deg_to_rad(9.61)) == doctest::Approx(0.0943).epsilon(1e-3));
    CHECK_THROWS_AS(los_probability(p, -0.01), Error);
    try {
        los_probability(p, -0.01);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidElevation);
    }
}

TEST_CASE("property: LoS probability is non-decreasing in elevation")
{
    Gen gen(21);
    for (int trial = 0; trial < 10000; ++trial) {
        ChannelParams p;
        p.los_a = gen.uniform(0.5, 30.0);
        p.los_b = gen.uniform(0.01, 1.0);
        double e1 = gen.uniform(0.0, kPi / 2);
        double e2 = gen.uniform(0.0, kPi / 2);
        if (e1 > e2) {
            std::swap(e1, e2);
        }
        const double p1 = los_probability(p, e1);
        const double p2 = los_probability(p, e2);
        CHECK(p1 <= p2);
        CHECK(p1 >= 0.0);
        CHECK(p2 <= 1.0);
    }
}

TEST_CASE("path loss hand values")
{
    const ChannelParams p;
    // 20 log10(4 pi 100 / 0.1499) + 1
    const double lambda = kSpeedOfLight / 2.0e9;
    CHECK(lambda == doctest::Approx(0.1499).epsilon(1e-3));
    const double los = path_loss_db(p, 100.0, true);
    // 20 log10(4 pi 100 * 2e9 / 299792458) = 78.46837 dB, plus 1 dB excess
    CHECK(los == doctest::Approx(79.46837).epsilon(1e-6));
    CHECK(std::abs(los - 79.46) < 0.01);
    CHECK(path_loss_db(p, 100.0, false) - los == doctest::Approx(19.0).epsilon(1e-12));
    CHECK(path_loss_db(p, 200.0, true) - los == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(p, 0.0, true), Error);
    CHECK_THROWS_AS(path_loss_db(p, -1.0, true), Error);
}

TEST_CASE("property: NLoS loss exceeds LoS loss")
{
    Gen gen(22);
    const ChannelParams p;
    for (int trial = 0; trial < 2000; ++trial) {
        const double d = std::exp(gen.uniform(-3.0, 9.0));
        CHECK(path_loss_db(p, d, true) < path_loss_db(p, d, false));
    }
}

TEST_CASE("free-space gain agrees with the dB path loss")
{
    ChannelParams p;
    p.eta_los_db = 0.0;
    for (double d : {1.0, 37.0, 100.0, 2500.0}) {
        CHECK(-10.0 * std::log10(free_space_gain(p, d)) == doctest::Approx(path_loss_db(p, d, true)).epsilon(1e-12));
    }
}

TEST_CASE("property: unit-mean fading")
{
    for (double m : {0.5, 1.0, 3.0}) {
        RandomStream rng({7, StreamTag::Test}, static_cast<std::uint64_t>(m * 10));
        const int n = 400000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += rng.unit_mean_gamma(m);
        }
        CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("exponential fading through sample_link")
{
    ChannelParams p;
    p.m_los = 1.0;
    p.m_nlos = 1.0;
    RandomStream rng({8, StreamTag::Test}, 0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += sample_link(p, {0, 0, 60}, {40, 10, 1.5}, 30.0, rng).fading_gain;
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("LoS frequency at the zenith matches the sigmoid")
{
    const ChannelParams p;
    RandomStream rng({9, StreamTag::Test}, 0);
    const int n = 100000;
    int los = 0;
    for (int i = 0; i < n; ++i) {
        los += sample_link(p, {0, 0, 100}, {0, 0, 1.5}, 30.0, rng).los ? 1 : 0;
    }
    const double q = los_probability(p, kPi / 2);
    const double sigma = std::sqrt(q * (1.0 - q) / n);
    CHECK(std::abs(static_cast<double>(los) / n - q) <= 3.0 * sigma + 1.0 / n);
}

TEST_CASE("sample_link is reproducible and consistent with realize_link")
{
    const ChannelParams p;
    RandomStream a({10, StreamTag::Test}, 3);
    RandomStream b({10, StreamTag::Test}, 3);
    RandomStream c({10, StreamTag::Test}, 3);
    for (int i = 0; i < 100; ++i) {
        const Point3 tx{0, 0, 50.0 + i};
        const Point3 rx{30.0 - i, 5, 1.5};
        const auto sa = sample_link(p, tx, rx, 30.0, a);
        const auto sb = sample_link(p, tx, rx, 30.0, b);
        const auto sc = realize_link(p, tx, rx, 30.0, draw_link_variates(p, c));
        CHECK(sa.los == sb.los);
        CHECK(sa.rx_power_dbm == sb.rx_power_dbm);
        CHECK(sa.rx_power_dbm == sc.rx_power_dbm);
    }
    CHECK_THROWS_AS(sample_link(p, {1, 1, 1}, {1, 1, 1}, 30.0, a), Error);
}

TEST_CASE("realized power with forced LoS and unit fading")
{
    const ChannelParams p;
    const LinkVariates v{0.0, 1.0, 1.0};
    const auto s = realize_link(p, {0, 0, 101.5}, {0, 0, 1.5}, 30.0, v);
    CHECK(s.los);
    CHECK(s.rx_power_dbm == doctest::Approx(30.0 - 79.46837).epsilon(1e-6));
    const LinkVariates nlos{0.999999999, 1.0, 0.5};
    const auto t = realize_link(p, {100, 0, 1.5}, {0, 0, 1.5}, 30.0, nlos);
    CHECK_FALSE(t.los);
    CHECK(t.rx_power_dbm == doctest::Approx(30.0 - 79.46837 - 19.0 + 10.0 * std::log10(0.5)).epsilon(1e-6));
}

TEST_CASE("SINR hand values")
{
    auto p = spec_params();
    p.interference_mode = InterferenceMode::Orthogonal;
    CHECK(sinr_db(at_dbm(-90.0), {}, p) == doctest::Approx(10.0).epsilon(1e-12));

    auto q = spec_params();
    q.noise_dbm = -300.0;
    const std::vector<LinkSample> one{at_dbm(-70.0)};
    CHECK(sinr_db(at_dbm(-70.0), one, q) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    auto co = spec_params();
    const std::vector<LinkSample> none;
    auto orth = co;
    orth.interference_mode = InterferenceMode::Orthogonal;
    CHECK(sinr_db(at_dbm(-85.0), none, co) == sinr_db(at_dbm(-85.0), none, orth));
    // Orthogonal mode ignores interferers entirely.
    CHECK(sinr_db(at_dbm(-85.0), one, orth) == sinr_db(at_dbm(-85.0), none, orth));
}

TEST_CASE("property: SINR strictly decreases as an interferer strengthens")
{
    Gen gen(23);
    const auto p = spec_params();
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<LinkSample> in{at_dbm(gen.uniform(-130, -60)), at_dbm(gen.uniform(-130, -60))};
        const double s = gen.uniform(-110, -50);
        const double before = sinr_db(at_dbm(s), in, p);
        in[gen.index(2)].rx_power_dbm += gen.uniform(0.5, 20.0);
        CHECK(sinr_db(at_dbm(s), in, p) < before);
    }
}

TEST_CASE("parameter validation")
{
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.los_b = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.m_los = 0.3;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.eta_nlos_db = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.noise_dbm = -INFINITY;
    CHECK_NOTHROW(p.validate());
}
