// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "../unit/poisson_chi_square.hpp"

#include "tethersim/experiments.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace tethersim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail)
{
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    failures += ok ? 0 : 1;
}

std::string num(double v, int digits = 4)
{
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig defaults(const std::string& yaml, Command command = Command::Sweep)
{
    auto c = parse_config(yaml, "acceptance");
    finalize_config(c, command);
    return c;
}

double uuav_mix(const DistancePoint& p, double availability)
{
    return coverage_with_availability(p.uuav_present, p.mbs_only, availability);
}

struct Crossing {
    int sign_changes = 0;
    bool tuav_better_first = false;
    std::optional<double> at;
};

// Sign changes of tUAV-optimal minus uUAV over the distance grid; exact ties are skipped.
Crossing find_crossing(const std::vector<DistancePoint>& pts, double availability)
{
    Crossing c;
    std::optional<std::pair<double, double>> prev;
    for (const auto& p : pts) {
        const double diff = p.tuav_optimal.p_cov - uuav_mix(p, availability);
        if (diff == 0.0) {
            continue;
        }
        if (!prev) {
            c.tuav_better_first = diff > 0.0;
        } else if ((prev->second > 0.0) != (diff > 0.0)) {
            ++c.sign_changes;
            if (!c.at) {
                const double t = prev->second / (prev->second - diff);
                c.at = prev->first + t * (p.distance_m - prev->first);
            }
        }
        prev = {p.distance_m, diff};
    }
    return c;
}

// Smallest accessibility at which the tether's mean coverage reaches `target`,
// linearly interpolated between adjacent levels.
std::optional<double> break_even(const AccessibilityResult& res, double tether, const std::vector<double>& levels,
                                 double target)
{
    std::optional<std::pair<double, double>> prev;
    for (double q : levels) {
        const auto& cell = res.cell(tether, q);
        const double p = static_cast<double>(cell.successes) / static_cast<double>(cell.samples);
        if (p >= target) {
            if (!prev) {
                return q;
            }
            return prev->first + (target - prev->second) / (p - prev->second) * (q - prev->first);
        }
        prev = {q, p};
    }
    return std::nullopt;
}

void distance_criteria()
{
    const auto cfg = defaults("campaign: distance_sweep\n");
    const auto t0 = std::chrono::steady_clock::now();
    const DistanceCampaign campaign(cfg, 1);
    std::vector<DistancePoint> pts;
    for (double d : cfg.sweep_values) {
        pts.push_back(campaign.evaluate(d));
    }
    const double elapsed = seconds_since(t0);

    bool dominated = true;
    std::string worst;
    for (const auto& p : pts) {
        if (p.tuav_optimal.successes < p.tuav_above_gs.successes) {
            dominated = false;
            worst = " violated at " + num(p.distance_m, 0) + " m";
        }
    }
    report(dominated && elapsed <= 600.0, "dominance",
           std::to_string(pts.size()) + " distances, optimal >= above-GS exactly" + worst + ", " + num(elapsed, 1) +
               " s");

    const auto c8 = find_crossing(pts, 0.8);
    const auto c7 = find_crossing(pts, 0.7);
    const bool once = c8.sign_changes == 1 && c8.tuav_better_first && c8.at && *c8.at >= 130.0 && *c8.at <= 260.0;
    const bool shifts = c7.sign_changes == 1 && c7.at && c8.at && *c7.at > *c8.at;
    std::string detail = "a=0.8 changes " + std::to_string(c8.sign_changes) + ", crossing " +
        (c8.at ? num(*c8.at, 1) + " m" : std::string("none")) + "; a=0.7 changes " +
        std::to_string(c7.sign_changes) + ", crossing " + (c7.at ? num(*c7.at, 1) + " m" : std::string("none"));
    report(once && shifts, "crossing", detail);

    double worst_affine = 0.0;
    for (const auto& p : pts) {
        const double v0 = uuav_mix(p, 0.0);
        const double v5 = uuav_mix(p, 0.5);
        const double v1 = uuav_mix(p, 1.0);
        worst_affine = std::max(worst_affine, std::abs(v5 - 0.5 * (v0 + v1)));
        worst_affine = std::max(worst_affine, std::abs(v0 - p.mbs_only.p_cov));
        worst_affine = std::max(worst_affine, std::abs(v1 - p.uuav_present.p_cov));
    }
    report(worst_affine <= 1e-12, "availability mixture",
           "max deviation from collinearity at {0, 0.5, 1}: " + sci(worst_affine));

    double worst_gap = -1.0;
    double worst_at = 0.0;
    for (const auto& p : pts) {
        const double gap = p.tuav_optimal.p_cov - uuav_mix(p, 1.0);
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_at = p.distance_m;
        }
    }
    report(worst_gap <= 0.02, "best-case uUAV",
           "largest tUAV-optimal minus uUAV(a=1) is " + num(worst_gap) + " at " + num(worst_at, 0) + " m");
}

void tether_criterion()
{
    const std::vector<double> tethers{80, 100, 120, 150};
    bool ok = true;
    std::size_t chains = 0;
    std::string where;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto cfg = defaults("campaign: distance_sweep\nseed: " + std::to_string(seed) + "\n");
        const DistanceCampaign campaign(cfg, 1);
        for (double d : cfg.sweep_values) {
            const auto chain = campaign.tether_chain(d, tethers);
            ++chains;
            for (std::size_t i = 1; i < chain.size(); ++i) {
                if (chain[i].tuav_optimal.successes < chain[i - 1].tuav_optimal.successes) {
                    ok = false;
                    where = ", drop at seed " + std::to_string(seed) + " distance " + num(d, 0);
                }
            }
        }
    }
    report(ok, "tether monotonicity",
           std::to_string(chains) + " chains over {80, 100, 120, 150} m, 3 seeds" + where);
}

void accessibility_criterion()
{
    const auto cfg = defaults("campaign: accessibility_sweep\n");
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = evaluate_accessibility(cfg, 1);
    const double elapsed = seconds_since(t0);
    const double target = coverage_with_availability(res.uuav_present, res.mbs_only, 0.9);
    const auto q80 = break_even(res, 80, cfg.sweep_values, target);
    const auto q120 = break_even(res, 120, cfg.sweep_values, target);
    const auto in_range = [](const std::optional<double>& q) { return q && *q >= 0.02 && *q <= 0.40; };
    const bool ok = q80 && q120 && *q120 < *q80 && in_range(q80) && in_range(q120) && *q80 - *q120 >= 0.05 &&
        res.replications == 200 && elapsed <= 1200.0;
    report(ok, "accessibility trend",
           "uUAV(a=0.9) " + num(target) + ", break-even L80 " + (q80 ? num(*q80, 3) : std::string("none")) +
               ", L120 " + (q120 ? num(*q120, 3) : std::string("none")) + ", " + std::to_string(res.replications) +
               " replications, " + num(elapsed, 1) + " s");
}

void statistics_criterion()
{
    const Rect window = Rect::centered({0, 0}, 2000.0);
    std::vector<std::uint64_t> counts;
    for (int r = 0; r < 1000; ++r) {
        RandomStream rng({101, StreamTag::Buildings}, r);
        counts.push_back(generate_buildings(window, 500.0, 20.0, 1.0, rng).buildings.size());
    }
    const double mean = 500.0 * window.area() / 1e6;
    const auto [stat, dof] = tethersim::testing::poisson_chi_square(counts, mean);
    const double critical =
        boost::math::quantile(boost::math::complement(boost::math::chi_squared_distribution<>(dof), 0.01));
    const bool chi_ok = stat <= critical;

    const ChannelParams channel;
    double worst_fading = 0.0;
    for (double m : {channel.m_los, channel.m_nlos}) {
        RandomStream rng({102, StreamTag::Test}, static_cast<std::uint64_t>(m));
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
            sum += rng.unit_mean_gamma(m);
        }
        worst_fading = std::max(worst_fading, std::abs(sum / 100000.0 - 1.0));
    }
    const bool fading_ok = worst_fading <= 0.01;

    RandomStream rng({103, StreamTag::Test}, 0);
    int covered = 0;
    for (int t = 0; t < 1000; ++t) {
        const double p = 0.05 + 0.9 * rng.uniform();
        std::uint64_t k = 0;
        for (int i = 0; i < 1000; ++i) {
            k += rng.uniform() < p ? 1 : 0;
        }
        const auto w = wilson_interval(k, 1000);
        covered += (w.low <= p && p <= w.high) ? 1 : 0;
    }
    const bool wilson_ok = covered >= 930;

    report(chi_ok && fading_ok && wilson_ok, "statistical suite",
           "chi2 " + num(stat, 2) + " <= " + num(critical, 2) + " (dof " + std::to_string(dof) +
               "), fading mean error " + num(worst_fading, 5) + ", Wilson coverage " + std::to_string(covered) +
               "/1000");
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism_criterion()
{
    const auto dir = fs::temp_directory_path() / "tethersim_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = dir / "sweep.yaml";
    std::ofstream(cfg) << "campaign: distance_sweep\n";
    bool ok = true;
    std::string detail;
    for (int seed : {11, 22, 33}) {
        std::string files[2];
        int i = 0;
        for (int workers : {1, 8}) {
            const auto out = dir / ("s" + std::to_string(seed) + "_w" + std::to_string(workers) + ".csv");
            const std::string cmd = std::string("\"") + TETHERSIM_EXE + "\" sweep \"" + cfg.string() + "\" --seed " +
                std::to_string(seed) + " --workers " + std::to_string(workers) + " --out \"" + out.string() + "\"";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
            }
            files[i++] = slurp(out);
        }
        const bool same = !files[0].empty() && files[0] == files[1];
        ok = ok && same;
        detail += (detail.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) +
            (same ? " identical" : " differs");
    }
    fs::remove_all(dir);
    report(ok, "determinism", "sweep --workers 1 vs 8: " + detail);
}

}  // namespace

int main()
{
    try {
        distance_criteria();
        tether_criterion();
        statistics_criterion();
        determinism_criterion();
        accessibility_criterion();
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
