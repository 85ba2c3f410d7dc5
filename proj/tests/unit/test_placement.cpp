#include "support.hpp"

#include "tethersim/error.hpp"
#include "tethersim/placement.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

using namespace tethersim;
using tethersim::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

Scenario scenario_at(double mbs_distance)
{
    Scenario s;
    s.mbs_position = {mbs_distance, 0.0, 30.0};
    return s;
}

HoveringRegion region_at(Point3 anchor, double tether)
{
    HoveringRegion r;
    r.anchor = anchor;
    r.tether_max = tether;
    return r;
}

CoverageEvaluator evaluator(const Scenario& s, std::size_t n, std::uint64_t seed)
{
    return CoverageEvaluator(s, std::make_shared<const SampleBank>(s.cluster, s.channel, n,
                                                                   StreamKey{seed, StreamTag::Placement}));
}

PlacementOptions coarse()
{
    PlacementOptions o;
    o.grid = {5, 8, 2};
    o.refine_max_evals = 20;
    return o;
}

}  // namespace

TEST_CASE("optimum dominates the above-GS point and stays feasible")
{
    Gen gen(51);
    for (int trial = 0; trial < 12; ++trial) {
        const double d = gen.uniform(60, 300);
        const auto s = scenario_at(d);
        const auto ev = evaluator(s, 3000, 100 + trial);
        const auto region = region_at({d, 0, 30}, gen.uniform(40, 150));
        const auto opt = optimize_tuav(ev, region, coarse());
        const auto zenith = ev.count_with_uav(above_gs_point(region), 0, ev.samples());
        CHECK(opt.successes >= zenith);
        CHECK(region_contains(region, opt.position));
        CHECK(opt.objective == doctest::Approx(static_cast<double>(opt.successes) / 3000.0));
        CHECK(opt.successes == ev.count_with_uav(opt.position, 0, ev.samples()));
        CHECK(opt.evaluations <= 2 * (4 * 8 + 1) + 20);
    }
}

TEST_CASE("single candidate grid")
{
    const auto s = scenario_at(160);
    const auto ev = evaluator(s, 2000, 1);
    HoveringRegion region = region_at({160, 0, 30}, 100);
    region.incl_min = kPi / 2;
    PlacementOptions o;
    o.grid = {1, 1, 1};
    o.refine_max_evals = 0;
    const auto r = optimize_tuav(ev, region, o);
    CHECK(r.position == Point3{160, 0, 130});
    CHECK(r.evaluations == 1);
    CHECK(r.successes == ev.count_with_uav({160, 0, 130}, 0, 2000));
}

TEST_CASE("symmetric instance: optimum sits over the cluster")
{
    // Cluster centred under the anchor and no MBS: coverage depends only on the
    // horizontal offset and altitude, so the search should end near the axis.
    Scenario s = scenario_at(160);
    s.channel.tx_power_mbs_dbm = -std::numeric_limits<double>::infinity();
    s.channel.interference_mode = InterferenceMode::Orthogonal;
    s.channel.sinr_threshold_db = 22.0;
    const auto ev = evaluator(s, 10000, 2);
    const auto region = region_at({0, 0, 20}, 120);
    const PlacementOptions o;
    const auto r = optimize_tuav(ev, region, o);
    const double step = r.position.z > region.anchor.z
        ? 120.0 * ((kPi / 2 - region.incl_min) / 9.0 / 2.0)
        : 0.0;
    INFO("optimum " << r.position.x << " " << r.position.y << " " << r.position.z);
    CHECK(std::hypot(r.position.x, r.position.y) <= step);
    CHECK(r.objective < 1.0);
}

TEST_CASE("tether monotonicity with nested grids and warm start")
{
    const auto s = scenario_at(200);
    const auto ev = evaluator(s, 4000, 3);
    PlacementOptions o = coarse();
    std::uint64_t prev = 0;
    Point3 carried{};
    bool have = false;
    for (double t : {40.0, 60.0, 80.0, 100.0, 120.0}) {
        o.grid.n_rad = static_cast<std::size_t>(t / 20.0);
        o.warm_start.clear();
        if (have) {
            o.warm_start.push_back(carried);
        }
        const auto r = optimize_tuav(ev, region_at({200, 0, 30}, t), o);
        CHECK(r.successes >= prev);
        prev = r.successes;
        carried = r.position;
        have = true;
    }
}

TEST_CASE("placement is deterministic")
{
    const auto s = scenario_at(180);
    const auto region = region_at({180, 0, 30}, 120);
    const auto a = optimize_tuav(s, region, 3000, {5, 8, 2}, 9, 1);
    const auto b = optimize_tuav(s, region, 3000, {5, 8, 2}, 9, 4);
    CHECK(a.position == b.position);
    CHECK(a.successes == b.successes);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("uUAV altitude ladder")
{
    const auto s = scenario_at(160);
    const auto ev = evaluator(s, 10000, 4);
    const double single[] = {100.0};
    const auto one = place_uuav(ev, single);
    CHECK(one.position == Point3{0, 0, 100});

    const auto ladder = default_uuav_altitudes();
    REQUIRE(ladder.size() == 15);
    CHECK(ladder.front() == 20.0);
    CHECK(ladder.back() == 300.0);
    const auto best = place_uuav(ev, ladder);
    for (double a : ladder) {
        CHECK(best.successes >= ev.count_with_uav({0, 0, a}, 0, ev.samples()));
    }
    // coverage vs altitude rises and then falls; the best rung is interior
    CHECK(best.position.z > ladder.front());
    CHECK(best.position.z < ladder.back());

    const double bad[] = {1.0};
    CHECK_THROWS_AS(place_uuav(ev, bad), Error);
    CHECK_THROWS_AS(place_uuav(ev, std::span<const double>{}), Error);
}
