#include "tethersim/config.hpp"

#include "tethersim/error.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tethersim {

namespace {

[[noreturn]] void fail(std::string_view source, const YAML::Mark& mark, const std::string& msg)
{
    std::ostringstream os;
    os << source;
    if (!mark.is_null()) {
        os << ":" << mark.line + 1;
    }
    os << ": " << msg;
    throw Error(ErrorCode::Config, os.str());
}

struct Reader {
    std::string_view source;
    std::string key;
    YAML::Node node;

    [[noreturn]] void bad(const std::string& what) const
    {
        fail(source, node.Mark(), "key '" + key + "' " + what);
    }

    double number() const
    {
        if (!node.IsScalar()) {
            bad("expects a number");
        }
        try {
            const double v = node.as<double>();
            if (!std::isfinite(v)) {
                bad("expects a finite number");
            }
            return v;
        } catch (const YAML::Exception&) {
            bad("expects a number, got '" + node.Scalar() + "'");
        }
    }

    std::uint64_t count() const
    {
        const double v = number();
        if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
            bad("expects a non-negative integer");
        }
        return static_cast<std::uint64_t>(v);
    }

    std::uint64_t seed() const
    {
        if (!node.IsScalar()) {
            bad("expects an integer");
        }
        try {
            return node.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            bad("expects a non-negative integer, got '" + node.Scalar() + "'");
        }
    }

    std::string text() const
    {
        if (!node.IsScalar()) {
            bad("expects a string");
        }
        return node.Scalar();
    }

    std::vector<double> numbers() const
    {
        if (!node.IsSequence()) {
            bad("expects a list of numbers");
        }
        std::vector<double> out;
        for (const auto& item : node) {
            out.push_back(Reader{source, key, item}.number());
        }
        return out;
    }

    std::vector<std::string> texts() const
    {
        if (!node.IsSequence()) {
            bad("expects a list of strings");
        }
        std::vector<std::string> out;
        for (const auto& item : node) {
            out.push_back(Reader{source, key, item}.text());
        }
        return out;
    }

    Point3 point() const
    {
        const auto v = numbers();
        if (v.size() != 3) {
            bad("expects [x, y, z]");
        }
        return {v[0], v[1], v[2]};
    }
};

using Setter = std::function<void(ExperimentConfig&, const Reader&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"campaign", [](ExperimentConfig& c, const Reader& r) { c.campaign = r.text(); }},
        {"uav_mode", [](ExperimentConfig& c, const Reader& r) { c.uav_mode = r.text(); }},
        {"seed", [](ExperimentConfig& c, const Reader& r) { c.seed = r.seed(); }},
        {"samples_per_eval", [](ExperimentConfig& c, const Reader& r) { c.samples_per_eval = r.count(); }},
        {"samples_final", [](ExperimentConfig& c, const Reader& r) { c.samples_final = r.count(); }},
        {"replications", [](ExperimentConfig& c, const Reader& r) { c.replications = r.count(); }},
        {"cluster_radius_m", [](ExperimentConfig& c, const Reader& r) { c.cluster_radius_m = r.number(); }},
        {"user_height_m", [](ExperimentConfig& c, const Reader& r) { c.user_height_m = r.number(); }},
        {"mbs_distance_m", [](ExperimentConfig& c, const Reader& r) { c.mbs_distance_m = r.number(); }},
        {"mbs_height_m", [](ExperimentConfig& c, const Reader& r) { c.mbs_height_m = r.number(); }},
        {"los_a", [](ExperimentConfig& c, const Reader& r) { c.channel.los_a = r.number(); }},
        {"los_b", [](ExperimentConfig& c, const Reader& r) { c.channel.los_b = r.number(); }},
        {"eta_los_db", [](ExperimentConfig& c, const Reader& r) { c.channel.eta_los_db = r.number(); }},
        {"eta_nlos_db", [](ExperimentConfig& c, const Reader& r) { c.channel.eta_nlos_db = r.number(); }},
        {"carrier_hz", [](ExperimentConfig& c, const Reader& r) { c.channel.carrier_hz = r.number(); }},
        {"m_los", [](ExperimentConfig& c, const Reader& r) { c.channel.m_los = r.number(); }},
        {"m_nlos", [](ExperimentConfig& c, const Reader& r) { c.channel.m_nlos = r.number(); }},
        {"tx_power_uav_dbm", [](ExperimentConfig& c, const Reader& r) { c.channel.tx_power_uav_dbm = r.number(); }},
        {"tx_power_mbs_dbm", [](ExperimentConfig& c, const Reader& r) { c.channel.tx_power_mbs_dbm = r.number(); }},
        {"noise_dbm", [](ExperimentConfig& c, const Reader& r) { c.channel.noise_dbm = r.number(); }},
        {"sinr_threshold_db", [](ExperimentConfig& c, const Reader& r) { c.channel.sinr_threshold_db = r.number(); }},
        {"interference_mode",
         [](ExperimentConfig& c, const Reader& r) {
             const auto v = r.text();
             if (v == "co_channel") {
                 c.channel.interference_mode = InterferenceMode::CoChannel;
             } else if (v == "orthogonal") {
                 c.channel.interference_mode = InterferenceMode::Orthogonal;
             } else {
                 r.bad("expects co_channel or orthogonal, got '" + v + "'");
             }
         }},
        {"availability", [](ExperimentConfig& c, const Reader& r) { c.availability = r.number(); }},
        {"tether_max_m", [](ExperimentConfig& c, const Reader& r) { c.tether_max_m = r.number(); }},
        {"incl_min_deg", [](ExperimentConfig& c, const Reader& r) { c.incl_min_deg = r.number(); }},
        {"alt_min_m", [](ExperimentConfig& c, const Reader& r) { c.alt_min_m = r.number(); }},
        {"gs_mast_m", [](ExperimentConfig& c, const Reader& r) { c.gs_mast_m = r.number(); }},
        {"gs_position_m", [](ExperimentConfig& c, const Reader& r) { c.gs_position_m = r.point(); }},
        {"uav_position_m", [](ExperimentConfig& c, const Reader& r) { c.uav_position_m = r.point(); }},
        {"density_per_km2", [](ExperimentConfig& c, const Reader& r) { c.density_per_km2 = r.number(); }},
        {"window_side_m", [](ExperimentConfig& c, const Reader& r) { c.window_side_m = r.number(); }},
        {"height_scale_m", [](ExperimentConfig& c, const Reader& r) { c.height_scale_m = r.number(); }},
        {"accessibility", [](ExperimentConfig& c, const Reader& r) { c.accessibility = r.number(); }},
        {"grid_n_incl", [](ExperimentConfig& c, const Reader& r) { c.grid.n_incl = r.count(); }},
        {"grid_n_azim", [](ExperimentConfig& c, const Reader& r) { c.grid.n_azim = r.count(); }},
        {"grid_n_rad", [](ExperimentConfig& c, const Reader& r) { c.grid.n_rad = r.count(); }},
        {"refine_max_evals", [](ExperimentConfig& c, const Reader& r) { c.refine_max_evals = r.count(); }},
        {"uuav_altitudes_m", [](ExperimentConfig& c, const Reader& r) { c.uuav_altitudes_m = r.numbers(); }},
        {"sweep_variable", [](ExperimentConfig& c, const Reader& r) { c.sweep_variable = r.text(); }},
        {"sweep_values", [](ExperimentConfig& c, const Reader& r) { c.sweep_values = r.numbers(); }},
        {"scenarios", [](ExperimentConfig& c, const Reader& r) { c.scenarios = r.texts(); }},
        {"tether_lengths_m", [](ExperimentConfig& c, const Reader& r) { c.tether_lengths_m = r.numbers(); }},
        {"availabilities", [](ExperimentConfig& c, const Reader& r) { c.availabilities = r.numbers(); }},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& msg)
{
    throw Error(ErrorCode::Config, msg);
}

void require(bool ok, const std::string& msg)
{
    if (!ok) {
        invalid(msg);
    }
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_double(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ExperimentConfig parse_config(std::string_view text, std::string_view source)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        fail(source, e.mark, "malformed YAML: " + e.msg);
    }
    ExperimentConfig cfg;
    if (root.IsNull()) {
        return cfg;
    }
    if (!root.IsMap()) {
        fail(source, root.Mark(), "top level must be a mapping of key: value");
    }
    const auto& table = setters();
    for (const auto& kv : root) {
        const std::string key = kv.first.Scalar();
        const auto it = table.find(key);
        if (it == table.end()) {
            fail(source, kv.first.Mark(), "unknown key '" + key + "'");
        }
        it->second(cfg, Reader{source, key, kv.second});
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        invalid("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void finalize_config(ExperimentConfig& c, Command command)
{
    require(c.samples_per_eval >= 1, "samples_per_eval must be at least 1");
    require(c.samples_final >= 1, "samples_final must be at least 1");
    require(c.replications >= 1, "replications must be at least 1");
    require(c.cluster_radius_m >= 0.0, "cluster_radius_m must be non-negative");
    require(c.user_height_m >= 0.0, "user_height_m must be non-negative");
    require(c.mbs_height_m > c.user_height_m, "mbs_height_m must exceed user_height_m");
    require(c.availability >= 0.0 && c.availability <= 1.0, "availability must lie in [0, 1]");
    require(c.tether_max_m > 0.0, "tether_max_m must be positive");
    require(c.incl_min_deg >= 0.0 && c.incl_min_deg <= 90.0, "incl_min_deg must lie in [0, 90]");
    require(c.gs_mast_m >= 0.0, "gs_mast_m must be non-negative");
    require(c.density_per_km2 >= 0.0, "density_per_km2 must be non-negative");
    require(c.window_side_m > 0.0, "window_side_m must be positive");
    require(c.height_scale_m > 0.0, "height_scale_m must be positive");
    require(c.accessibility >= 0.0 && c.accessibility <= 1.0, "accessibility must lie in [0, 1]");
    require(c.grid.n_incl >= 1 && c.grid.n_azim >= 1 && c.grid.n_rad >= 1, "grid sizes must be at least 1");
    require(!c.uuav_altitudes_m.empty(), "uuav_altitudes_m must not be empty");
    for (double a : c.uuav_altitudes_m) {
        require(a > c.user_height_m, "uuav_altitudes_m entries must exceed user_height_m");
    }
    for (double a : c.availabilities) {
        require(a >= 0.0 && a <= 1.0, "availabilities entries must lie in [0, 1]");
    }
    for (double l : c.tether_lengths_m) {
        require(l > 0.0, "tether_lengths_m entries must be positive");
    }
    try {
        c.channel.validate();
    } catch (const Error& e) {
        invalid(e.what());
    }

    if (command == Command::Simulate || command == Command::Optimize) {
        require(!c.uav_mode.empty(), "missing required key 'uav_mode'");
        require(c.uav_mode == "tethered" || c.uav_mode == "untethered",
                "uav_mode must be tethered or untethered, got '" + c.uav_mode + "'");
    }
    if (command != Command::Sweep) {
        return;
    }

    require(!c.campaign.empty(), "missing required key 'campaign'");
    if (c.campaign == "distance_sweep") {
        if (c.sweep_variable.empty()) {
            c.sweep_variable = "mbs_distance";
        }
        require(c.sweep_variable == "mbs_distance" || c.sweep_variable == "availability" ||
                    c.sweep_variable == "tether_max",
                "sweep_variable must be mbs_distance, availability or tether_max for distance_sweep");
        if (c.sweep_values.empty()) {
            if (c.sweep_variable == "mbs_distance") {
                for (int d = 60; d <= 300; d += 20) {
                    c.sweep_values.push_back(d);
                }
            } else if (c.sweep_variable == "availability") {
                c.sweep_values = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
            } else {
                c.sweep_values = {40, 60, 80, 100, 120, 150};
            }
        }
        if (c.scenarios.empty()) {
            c.scenarios = {"tuav_above_gs", "tuav_optimal", "uuav"};
        }
        for (const auto& s : c.scenarios) {
            require(s == "tuav_above_gs" || s == "tuav_optimal" || s == "uuav" || s == "mbs_only",
                    "unknown scenario label '" + s + "'");
        }
        for (double v : c.sweep_values) {
            if (c.sweep_variable == "mbs_distance") {
                require(v > 0.0, "mbs_distance sweep values must be positive");
            } else if (c.sweep_variable == "availability") {
                require(v >= 0.0 && v <= 1.0, "availability sweep values must lie in [0, 1]");
            } else {
                require(v > 0.0, "tether_max sweep values must be positive");
            }
        }
    } else if (c.campaign == "accessibility_sweep") {
        if (c.sweep_variable.empty()) {
            c.sweep_variable = "accessibility";
        }
        require(c.sweep_variable == "accessibility", "sweep_variable must be accessibility for accessibility_sweep");
        if (c.sweep_values.empty()) {
            c.sweep_values = {0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.5, 0.7, 1.0};
        }
        for (double v : c.sweep_values) {
            require(v >= 0.0 && v <= 1.0, "accessibility sweep values must lie in [0, 1]");
        }
        require(!c.tether_lengths_m.empty(), "tether_lengths_m must not be empty");
        require(c.scenarios.empty(), "scenarios is not used by accessibility_sweep");
    } else {
        invalid("campaign must be distance_sweep or accessibility_sweep, got '" + c.campaign + "'");
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c)
{
    std::vector<std::pair<std::string, std::string>> e;
    auto num = [&](const char* k, double v) { e.emplace_back(k, format_double(v)); };
    auto cnt = [&](const char* k, std::uint64_t v) { e.emplace_back(k, std::to_string(v)); };
    if (!c.campaign.empty()) {
        e.emplace_back("campaign", c.campaign);
    }
    if (!c.uav_mode.empty()) {
        e.emplace_back("uav_mode", c.uav_mode);
    }
    cnt("seed", c.seed);
    cnt("samples_per_eval", c.samples_per_eval);
    cnt("samples_final", c.samples_final);
    cnt("replications", c.replications);
    num("cluster_radius_m", c.cluster_radius_m);
    num("user_height_m", c.user_height_m);
    num("mbs_distance_m", c.mbs_distance_m);
    num("mbs_height_m", c.mbs_height_m);
    num("los_a", c.channel.los_a);
    num("los_b", c.channel.los_b);
    num("eta_los_db", c.channel.eta_los_db);
    num("eta_nlos_db", c.channel.eta_nlos_db);
    num("carrier_hz", c.channel.carrier_hz);
    num("m_los", c.channel.m_los);
    num("m_nlos", c.channel.m_nlos);
    num("tx_power_uav_dbm", c.channel.tx_power_uav_dbm);
    num("tx_power_mbs_dbm", c.channel.tx_power_mbs_dbm);
    num("noise_dbm", c.channel.noise_dbm);
    num("sinr_threshold_db", c.channel.sinr_threshold_db);
    e.emplace_back("interference_mode", to_string(c.channel.interference_mode));
    num("availability", c.availability);
    num("tether_max_m", c.tether_max_m);
    num("incl_min_deg", c.incl_min_deg);
    num("alt_min_m", c.alt_min_m);
    num("gs_mast_m", c.gs_mast_m);
    if (c.gs_position_m) {
        e.emplace_back("gs_position_m", fmt_list({c.gs_position_m->x, c.gs_position_m->y, c.gs_position_m->z}));
    }
    if (c.uav_position_m) {
        e.emplace_back("uav_position_m", fmt_list({c.uav_position_m->x, c.uav_position_m->y, c.uav_position_m->z}));
    }
    num("density_per_km2", c.density_per_km2);
    num("window_side_m", c.window_side_m);
    num("height_scale_m", c.height_scale_m);
    num("accessibility", c.accessibility);
    cnt("grid_n_incl", c.grid.n_incl);
    cnt("grid_n_azim", c.grid.n_azim);
    cnt("grid_n_rad", c.grid.n_rad);
    cnt("refine_max_evals", c.refine_max_evals);
    e.emplace_back("uuav_altitudes_m", fmt_list(c.uuav_altitudes_m));
    if (!c.sweep_variable.empty()) {
        e.emplace_back("sweep_variable", c.sweep_variable);
    }
    if (!c.sweep_values.empty()) {
        e.emplace_back("sweep_values", fmt_list(c.sweep_values));
    }
    if (!c.scenarios.empty()) {
        std::string s = "[";
        for (std::size_t i = 0; i < c.scenarios.size(); ++i) {
            s += (i ? ", " : "") + c.scenarios[i];
        }
        e.emplace_back("scenarios", s + "]");
    }
    e.emplace_back("tether_lengths_m", fmt_list(c.tether_lengths_m));
    e.emplace_back("availabilities", fmt_list(c.availabilities));
    return e;
}

Scenario make_scenario(const ExperimentConfig& c, double mbs_distance_m)
{
    Scenario s;
    s.cluster.center = {0.0, 0.0};
    s.cluster.radius = c.cluster_radius_m;
    s.cluster.user_height = c.user_height_m;
    s.mbs_position = {mbs_distance_m, 0.0, c.mbs_height_m};
    s.channel = c.channel;
    s.uav_mode = Untethered{c.availability};
    return s;
}

HoveringRegion make_region(const ExperimentConfig& c, const Point3& anchor, double tether_max_m)
{
    HoveringRegion r;
    r.anchor = anchor;
    r.tether_max = tether_max_m;
    r.incl_min = deg_to_rad(c.incl_min_deg);
    r.alt_min = c.alt_min_m;
    r.validate();
    return r;
}

}  // namespace tethersim
