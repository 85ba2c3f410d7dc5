#include "tethersim/experiments.hpp"

#include "tethersim/error.hpp"
#include "tethersim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#ifndef TETHERSIM_VERSION
#define TETHERSIM_VERSION "0.0.0"
#endif

namespace tethersim {

namespace {

StreamKey replication_key(std::uint64_t seed, StreamTag tag, std::uint64_t replication)
{
    // Offset keeps replication sub-families apart from the campaign-wide banks.
    return {derive_seed(seed, static_cast<std::uint64_t>(tag), (std::uint64_t{1} << 40) + replication), tag};
}

std::shared_ptr<const SampleBank> make_bank(const ExperimentConfig& c, std::size_t n, StreamKey key,
                                            std::size_t workers)
{
    UserCluster cluster;
    cluster.radius = c.cluster_radius_m;
    cluster.user_height = c.user_height_m;
    return std::make_shared<const SampleBank>(cluster, c.channel, n, key, workers);
}

PlacementOptions placement_options(const ExperimentConfig& c, std::size_t workers)
{
    PlacementOptions o;
    o.grid = c.grid;
    o.refine_max_evals = c.refine_max_evals;
    o.workers = workers;
    return o;
}

// Second stage of the placement: re-score a short list on the report bank and keep
// the best, first entry on ties.
struct Shortlisted {
    Point3 position;
    CoverageEstimate estimate;
};

Shortlisted pick_on_report(const CoverageEvaluator& report, const std::vector<Point3>& shortlist,
                           std::size_t workers)
{
    Shortlisted best{shortlist.front(), report.with_uav(shortlist.front(), workers)};
    for (std::size_t i = 1; i < shortlist.size(); ++i) {
        if (shortlist[i] == best.position) {
            continue;
        }
        auto e = report.with_uav(shortlist[i], workers);
        if (e.successes > best.estimate.successes) {
            best = {shortlist[i], e};
        }
    }
    return best;
}

// Largest common radial step not above `limit` for which every tether is an integer
// multiple; 0 when the tethers share no millimetre grid.
double common_radial_step(const std::vector<double>& tethers, double limit)
{
    std::int64_t g = 0;
    for (double t : tethers) {
        const double mm = t * 1000.0;
        if (std::abs(mm - std::round(mm)) > 1e-6) {
            return 0.0;
        }
        g = std::gcd(g, static_cast<std::int64_t>(std::llround(mm)));
    }
    if (g == 0) {
        return 0.0;
    }
    const auto lim = static_cast<std::int64_t>(std::floor(limit * 1000.0 + 1e-6));
    for (std::int64_t k = 1; k <= g; ++k) {
        if (g % k == 0 && g / k <= lim) {
            return static_cast<double>(g / k) / 1000.0;
        }
    }
    return 0.0;
}

ResultRow row_from(double value, std::string label, const CoverageEstimate& e, std::uint64_t seed)
{
    ResultRow r;
    r.sweep_value = value;
    r.scenario = std::move(label);
    r.p_cov = e.p_cov;
    r.ci_low = e.ci_low;
    r.ci_high = e.ci_high;
    r.n_samples = e.n_samples;
    r.replications = 1;
    r.seed = seed;
    return r;
}

}  // namespace

void SweepSpec::validate() const
{
    if (values.empty()) {
        throw Error(ErrorCode::Config, "sweep values must not be empty");
    }
    if (!std::is_sorted(values.begin(), values.end()) ||
        std::adjacent_find(values.begin(), values.end()) != values.end()) {
        throw Error(ErrorCode::Config, "sweep values must be strictly ascending");
    }
    if (replications < 1) {
        throw Error(ErrorCode::Config, "replications must be at least 1");
    }
}

SweepSpec sweep_spec(const ExperimentConfig& c)
{
    SweepSpec s;
    s.variable = c.sweep_variable;
    s.values = c.sweep_values;
    s.replications = c.campaign == "accessibility_sweep" ? c.replications : 1;
    if (c.campaign == "accessibility_sweep") {
        for (double t : c.tether_lengths_m) {
            s.scenarios.push_back(tether_label(t));
        }
        for (double a : c.availabilities) {
            s.scenarios.push_back(availability_label(a));
        }
    } else {
        s.scenarios = c.scenarios;
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Distance campaign

DistanceCampaign::DistanceCampaign(const ExperimentConfig& config, std::size_t workers)
    : config_(config), workers_(std::max<std::size_t>(workers, 1))
{
    placement_bank_ = make_bank(config_, config_.samples_per_eval, {config_.seed, StreamTag::Placement}, workers_);
    report_bank_ = make_bank(config_, config_.samples_final, {config_.seed, StreamTag::Report}, workers_);
}

DistancePoint DistanceCampaign::evaluate(double distance_m, double tether_max_m) const
{
    const Scenario scenario = make_scenario(config_, distance_m);
    const CoverageEvaluator placement(scenario, placement_bank_);
    const CoverageEvaluator report(scenario, report_bank_);

    DistancePoint out;
    out.distance_m = distance_m;
    out.mbs_only = report.mbs_only();
    out.uuav_placement = place_uuav(placement, config_.uuav_altitudes_m, workers_);
    out.uuav_present = report.with_uav(out.uuav_placement.position, workers_);

    const Point3 anchor{distance_m, 0.0, config_.mbs_height_m + config_.gs_mast_m};
    const HoveringRegion region = make_region(config_, anchor, tether_max_m);
    out.tuav_placement = optimize_tuav(placement, region, placement_options(config_, workers_));
    const Point3 zenith = above_gs_point(region);
    out.tuav_above_gs = report.with_uav(zenith, workers_);
    const auto pick = pick_on_report(report, {out.tuav_placement.position, zenith}, workers_);
    out.tuav_placement.position = pick.position;
    out.tuav_optimal = pick.estimate;
    return out;
}

std::vector<DistancePoint> DistanceCampaign::tether_chain(double distance_m, std::vector<double> tethers) const
{
    std::sort(tethers.begin(), tethers.end());
    tethers.erase(std::unique(tethers.begin(), tethers.end()), tethers.end());
    if (tethers.empty()) {
        return {};
    }
    const Scenario scenario = make_scenario(config_, distance_m);
    const CoverageEvaluator placement(scenario, placement_bank_);
    const CoverageEvaluator report(scenario, report_bank_);
    const Point3 anchor{distance_m, 0.0, config_.mbs_height_m + config_.gs_mast_m};

    DistancePoint base;
    base.distance_m = distance_m;
    base.mbs_only = report.mbs_only();
    base.uuav_placement = place_uuav(placement, config_.uuav_altitudes_m, workers_);
    base.uuav_present = report.with_uav(base.uuav_placement.position, workers_);

    const double step = common_radial_step(tethers, tethers.front() / static_cast<double>(config_.grid.n_rad));
    std::vector<DistancePoint> out;
    std::optional<Point3> carried;
    for (double tether : tethers) {
        const HoveringRegion region = make_region(config_, anchor, tether);
        PlacementOptions opts = placement_options(config_, workers_);
        if (step > 0.0) {
            opts.grid.n_rad = static_cast<std::size_t>(std::llround(tether / step));
        }
        if (carried) {
            opts.warm_start.push_back(*carried);
        }
        DistancePoint p = base;
        p.tuav_placement = optimize_tuav(placement, region, opts);
        const Point3 zenith = above_gs_point(region);
        p.tuav_above_gs = report.with_uav(zenith, workers_);
        std::vector<Point3> shortlist{p.tuav_placement.position, zenith};
        if (carried) {
            shortlist.push_back(*carried);
        }
        const auto pick = pick_on_report(report, shortlist, workers_);
        p.tuav_placement.position = pick.position;
        p.tuav_optimal = pick.estimate;
        carried = pick.position;
        out.push_back(p);
    }
    return out;
}

std::vector<ResultRow> run_distance_campaign(const ExperimentConfig& config, std::size_t workers)
{
    const SweepSpec spec = sweep_spec(config);
    std::vector<ResultRow> rows;
    auto emit = [&](double value, const DistancePoint& p, double availability) {
        for (const auto& label : spec.scenarios) {
            if (label == "uuav") {
                rows.push_back(row_from(value, label, mix_estimates(p.uuav_present, p.mbs_only, availability), config.seed));
            } else if (label == "tuav_optimal") {
                rows.push_back(row_from(value, label, p.tuav_optimal, config.seed));
            } else if (label == "tuav_above_gs") {
                rows.push_back(row_from(value, label, p.tuav_above_gs, config.seed));
            } else if (label == "mbs_only") {
                rows.push_back(row_from(value, label, p.mbs_only, config.seed));
            }
        }
    };

    if (spec.variable == "mbs_distance") {
        // Sweep points run concurrently; each one is single-threaded inside.
        const DistanceCampaign campaign(config, workers);
        const DistanceCampaign serial(config, 1);
        std::vector<DistancePoint> points(spec.values.size());
        parallel_for(points.size(), workers, [&](std::size_t i) { points[i] = serial.evaluate(spec.values[i]); });
        for (std::size_t i = 0; i < points.size(); ++i) {
            emit(spec.values[i], points[i], config.availability);
        }
    } else if (spec.variable == "availability") {
        const DistanceCampaign campaign(config, workers);
        const DistancePoint p = campaign.evaluate(config.mbs_distance_m);
        for (double a : spec.values) {
            emit(a, p, a);
        }
    } else if (spec.variable == "tether_max") {
        const DistanceCampaign campaign(config, workers);
        const auto chain = campaign.tether_chain(config.mbs_distance_m, spec.values);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            emit(spec.values[i], chain[i], config.availability);
        }
    } else {
        throw Error(ErrorCode::Config, "distance_sweep cannot sweep '" + spec.variable + "'");
    }
    sort_rows(rows);
    return rows;
}

// ---------------------------------------------------------------------------
// Rooftop accessibility campaign

const AccessibilityCell& AccessibilityResult::cell(double tether_m, double accessibility) const
{
    for (const auto& c : cells) {
        if (c.tether_m == tether_m && c.accessibility == accessibility) {
            return c;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "no such (tether, accessibility) cell");
}

namespace {

struct ReplicationOutcome {
    std::vector<std::uint64_t> successes;  // tether-major cells
    std::vector<bool> absent;
};

ReplicationOutcome run_replication(const ExperimentConfig& c, const Scenario& scenario,
                                   const std::vector<double>& tethers, const std::vector<double>& levels,
                                   std::size_t r)
{
    RandomStream rng({c.seed, StreamTag::Buildings}, r);
    const Rect window = Rect::centered(scenario.cluster.center, c.window_side_m);
    const BuildingField field = generate_buildings(window, c.density_per_km2, c.height_scale_m, c.accessibility, rng);

    // Nearest accessible rooftop per accessibility level, as an index into the field.
    std::vector<std::optional<std::size_t>> site(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const BuildingField view = field.with_accessibility(levels[k]);
        try {
            const Building& b = nearest_accessible_rooftop(view, scenario.cluster.center);
            site[k] = static_cast<std::size_t>(&b - view.buildings.data());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoAccessibleRooftop) {
                throw;
            }
        }
    }

    const auto placement_bank =
        make_bank(c, c.samples_per_eval, replication_key(c.seed, StreamTag::Placement, r), 1);
    const auto report_bank = make_bank(c, c.samples_final, replication_key(c.seed, StreamTag::Report, r), 1);
    const CoverageEvaluator placement(scenario, placement_bank);
    const CoverageEvaluator report(scenario, report_bank);
    const std::uint64_t mbs_only = report.mbs_only().successes;

    ReplicationOutcome out;
    out.successes.assign(tethers.size() * levels.size(), 0);
    out.absent.assign(tethers.size() * levels.size(), false);
    std::map<std::size_t, Point3> carried;  // per building: report pick at the previous tether
    for (std::size_t t = 0; t < tethers.size(); ++t) {
        std::map<std::size_t, std::uint64_t> done;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const std::size_t cell = t * levels.size() + k;
            if (!site[k]) {
                out.successes[cell] = mbs_only;
                out.absent[cell] = true;
                continue;
            }
            const std::size_t b = *site[k];
            if (auto it = done.find(b); it != done.end()) {
                out.successes[cell] = it->second;
                continue;
            }
            const HoveringRegion region =
                make_region(c, gs_from_building(field.buildings[b], c.gs_mast_m), tethers[t]);
            PlacementOptions opts = placement_options(c, 1);
            std::vector<Point3> shortlist;
            if (auto it = carried.find(b); it != carried.end()) {
                opts.warm_start.push_back(it->second);
            }
            const PlacementResult opt = optimize_tuav(placement, region, opts);
            shortlist.push_back(opt.position);
            shortlist.push_back(above_gs_point(region));
            if (auto it = carried.find(b); it != carried.end()) {
                shortlist.push_back(it->second);
            }
            const auto pick = pick_on_report(report, shortlist, 1);
            carried[b] = pick.position;
            done[b] = pick.estimate.successes;
            out.successes[cell] = pick.estimate.successes;
        }
    }
    return out;
}

}  // namespace

AccessibilityResult evaluate_accessibility(const ExperimentConfig& config, std::size_t workers)
{
    std::vector<double> tethers = config.tether_lengths_m;
    std::sort(tethers.begin(), tethers.end());
    tethers.erase(std::unique(tethers.begin(), tethers.end()), tethers.end());
    std::vector<double> levels = config.sweep_values;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (tethers.empty() || levels.empty()) {
        throw Error(ErrorCode::Config, "accessibility campaign needs tether lengths and accessibility values");
    }

    const Scenario scenario = make_scenario(config, config.mbs_distance_m);

    AccessibilityResult result;
    result.replications = config.replications;
    {
        const CoverageEvaluator placement(
            scenario, make_bank(config, config.samples_per_eval, {config.seed, StreamTag::Placement}, workers));
        const CoverageEvaluator report(
            scenario, make_bank(config, config.samples_final, {config.seed, StreamTag::Report}, workers));
        result.uuav_placement = place_uuav(placement, config.uuav_altitudes_m, workers);
        result.uuav_present = report.with_uav(result.uuav_placement.position, workers);
        result.mbs_only = report.mbs_only();
    }

    std::vector<ReplicationOutcome> reps(config.replications);
    parallel_for(reps.size(), workers,
                 [&](std::size_t r) { reps[r] = run_replication(config, scenario, tethers, levels, r); });

    for (std::size_t t = 0; t < tethers.size(); ++t) {
        for (std::size_t k = 0; k < levels.size(); ++k) {
            AccessibilityCell cell;
            cell.tether_m = tethers[t];
            cell.accessibility = levels[k];
            const std::size_t idx = t * levels.size() + k;
            for (const auto& rep : reps) {
                cell.successes += rep.successes[idx];
                cell.samples += config.samples_final;
                cell.absent += rep.absent[idx] ? 1 : 0;
                cell.per_replication.push_back(static_cast<double>(rep.successes[idx]) /
                                               static_cast<double>(config.samples_final));
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

std::vector<ResultRow> rows_from_accessibility(const ExperimentConfig& config, const AccessibilityResult& result)
{
    std::vector<ResultRow> rows;
    for (const auto& cell : result.cells) {
        ResultRow r = row_from(cell.accessibility, tether_label(cell.tether_m),
                               make_estimate(cell.successes, cell.samples, config.seed), config.seed);
        r.replications = result.replications;
        r.tuav_absent_fraction = static_cast<double>(cell.absent) / static_cast<double>(result.replications);
        rows.push_back(std::move(r));
    }
    std::vector<double> levels;
    for (const auto& cell : result.cells) {
        if (std::find(levels.begin(), levels.end(), cell.accessibility) == levels.end()) {
            levels.push_back(cell.accessibility);
        }
    }
    for (double a : config.availabilities) {
        const auto e = mix_estimates(result.uuav_present, result.mbs_only, a);
        for (double q : levels) {
            rows.push_back(row_from(q, availability_label(a), e, config.seed));
        }
    }
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_rooftop_campaign(const ExperimentConfig& config, std::size_t workers)
{
    sweep_spec(config);
    return rows_from_accessibility(config, evaluate_accessibility(config, workers));
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config, std::size_t workers)
{
    if (config.campaign == "distance_sweep") {
        return run_distance_campaign(config, workers);
    }
    if (config.campaign == "accessibility_sweep") {
        return run_rooftop_campaign(config, workers);
    }
    throw Error(ErrorCode::Config, "unknown campaign '" + config.campaign + "'");
}

// ---------------------------------------------------------------------------
// Single-scenario commands

Point3 default_anchor(const ExperimentConfig& c)
{
    if (c.gs_position_m) {
        return {c.gs_position_m->x, c.gs_position_m->y, c.gs_position_m->z + c.gs_mast_m};
    }
    return {c.mbs_distance_m, 0.0, c.mbs_height_m + c.gs_mast_m};
}

namespace {

struct SinglePlacement {
    PlacementResult placement;
    std::string label;
};

SinglePlacement place_single(const ExperimentConfig& c, const CoverageEvaluator& placement, std::size_t workers)
{
    SinglePlacement out;
    if (c.uav_mode == "untethered") {
        out.label = "uuav";
        if (c.uav_position_m) {
            out.placement.position = *c.uav_position_m;
        } else {
            out.placement = place_uuav(placement, c.uuav_altitudes_m, workers);
            return out;
        }
    } else {
        out.label = "tuav";
        const HoveringRegion region = make_region(c, default_anchor(c), c.tether_max_m);
        if (c.uav_position_m) {
            if (!region_contains(region, *c.uav_position_m)) {
                throw Error(ErrorCode::Config, "uav_position_m lies outside the hovering region");
            }
            out.placement.position = *c.uav_position_m;
        } else {
            out.placement = optimize_tuav(placement, region, placement_options(c, workers));
            return out;
        }
    }
    // Fixed position: score it on the placement bank like a one-point search.
    const auto e = placement.with_uav(out.placement.position, workers);
    out.placement.successes = e.successes;
    out.placement.objective = e.p_cov;
    out.placement.evaluations = 1;
    return out;
}

}  // namespace

SimulateOutput run_simulate(const ExperimentConfig& c, std::size_t workers)
{
    const Scenario scenario = make_scenario(c, c.mbs_distance_m);
    const CoverageEvaluator placement(scenario, make_bank(c, c.samples_per_eval, {c.seed, StreamTag::Placement}, workers));
    const CoverageEvaluator report(scenario, make_bank(c, c.samples_final, {c.seed, StreamTag::Report}, workers));

    SinglePlacement single = place_single(c, placement, workers);
    SimulateOutput out;
    CoverageEstimate e;
    if (c.uav_mode == "untethered") {
        e = mix_estimates(report.with_uav(single.placement.position, workers), report.mbs_only(), c.availability);
    } else if (c.uav_position_m) {
        e = report.with_uav(single.placement.position, workers);
    } else {
        const HoveringRegion region = make_region(c, default_anchor(c), c.tether_max_m);
        const auto pick = pick_on_report(report, {single.placement.position, above_gs_point(region)}, workers);
        single.placement.position = pick.position;
        e = pick.estimate;
    }
    out.row = row_from(c.mbs_distance_m, single.label, e, c.seed);
    out.placement = single.placement;
    return out;
}

PlacementResult run_optimize(const ExperimentConfig& c, std::size_t workers)
{
    const Scenario scenario = make_scenario(c, c.mbs_distance_m);
    const CoverageEvaluator placement(scenario, make_bank(c, c.samples_per_eval, {c.seed, StreamTag::Placement}, workers));
    return place_single(c, placement, workers).placement;
}

BuildingField run_gen_buildings(const ExperimentConfig& c)
{
    RandomStream rng({c.seed, StreamTag::Buildings}, 0);
    return generate_buildings(Rect::centered({0.0, 0.0}, c.window_side_m), c.density_per_km2, c.height_scale_m,
                              c.accessibility, rng);
}

// ---------------------------------------------------------------------------
// Output

std::string tether_label(double tether_m)
{
    return "tuav_L" + format_double(tether_m);
}

std::string availability_label(double availability)
{
    return "uuav_a" + format_double(availability);
}

void sort_rows(std::vector<ResultRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_value != b.sweep_value) {
            return a.sweep_value < b.sweep_value;
        }
        return a.scenario < b.scenario;
    });
}

std::string version_string()
{
    return TETHERSIM_VERSION;
}

void write_metadata(std::ostream& os, const ExperimentConfig& config, std::string_view command)
{
    os << "# tethersim " << version_string() << "\n";
    os << "# command: " << command << "\n";
    for (const auto& [k, v] : config_entries(config)) {
        os << "# " << k << ": " << v << "\n";
    }
}

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << "sweep_value,scenario,p_cov,ci_low,ci_high,n_samples,replications,seed,tuav_absent_fraction\n";
    for (const auto& r : rows) {
        os << format_double(r.sweep_value) << ',' << r.scenario << ',' << format_double(r.p_cov) << ','
           << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ',' << r.n_samples << ','
           << r.replications << ',' << r.seed << ',' << format_double(r.tuav_absent_fraction) << "\n";
    }
}

void write_placement_csv(std::ostream& os, const PlacementResult& p, std::string_view label)
{
    os << "scenario,x_m,y_m,z_m,objective,successes,evaluations\n";
    os << label << ',' << format_double(p.position.x) << ',' << format_double(p.position.y) << ','
       << format_double(p.position.z) << ',' << format_double(p.objective) << ',' << p.successes << ','
       << p.evaluations << "\n";
}

void write_file_atomic(const std::string& path, const std::string& contents)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
        }
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorCode::InvalidArgument, "failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::InvalidArgument, "cannot move output into '" + path + "'");
    }
}

}  // namespace tethersim
