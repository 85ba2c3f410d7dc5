// tethersim: coverage experiments for tethered and untethered aerial base stations.

#include "tethersim/config.hpp"
#include "tethersim/error.hpp"
#include "tethersim/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace tethersim;

namespace {

struct Flags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::string out;
    std::size_t workers = 1;
    std::string format = "csv";
    std::string config_path;
};

ExperimentConfig load(const Flags& f, Command command)
{
    ExperimentConfig c = load_config(f.config_path);
    if (f.seed) {
        c.seed = *f.seed;
    }
    if (f.samples) {
        c.samples_per_eval = *f.samples;
        c.samples_final = *f.samples;
    }
    finalize_config(c, command);
    return c;
}

std::string run(const std::string& name, const Flags& f)
{
    std::ostringstream os;
    if (name == "simulate") {
        const auto c = load(f, Command::Simulate);
        const auto out = run_simulate(c, f.workers);
        write_metadata(os, c, name);
        const auto& p = out.placement.position;
        os << "# uav_position_m: [" << format_double(p.x) << ", " << format_double(p.y) << ", "
           << format_double(p.z) << "]\n";
        write_rows_csv(os, {out.row});
    } else if (name == "sweep") {
        const auto c = load(f, Command::Sweep);
        const auto rows = run_sweep(c, f.workers);
        write_metadata(os, c, name);
        write_rows_csv(os, rows);
    } else if (name == "optimize") {
        const auto c = load(f, Command::Optimize);
        const auto p = run_optimize(c, f.workers);
        write_metadata(os, c, name);
        write_placement_csv(os, p, c.uav_mode == "tethered" ? "tuav" : "uuav");
    } else {
        const auto c = load(f, Command::GenBuildings);
        const auto field = run_gen_buildings(c);
        write_metadata(os, c, name);
        write_buildings_csv(os, field);
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coverage of tethered vs untethered UAV base stations"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--seed", flags.seed, "Master seed (overrides the config)");
    app.add_option("--samples", flags.samples, "Samples per evaluation and per reported point")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", flags.out, "Output file (default: stdout)");
    app.add_option("--workers", flags.workers, "Worker threads; results do not depend on it")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
    app.add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv"}));

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "Evaluate one scenario and print one result row"},
        {"sweep", "Run a campaign and print its result table"},
        {"optimize", "Print the UAV placement for one scenario"},
        {"gen-buildings", "Dump one realization of the building field"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->add_option("config", flags.config_path, "YAML config file")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const std::string text = run(name, flags);
        if (flags.out.empty()) {
            std::cout << text;
        } else {
            write_file_atomic(flags.out, text);
        }
    } catch (const Error& e) {
        std::cerr << "tethersim " << name << ": " << e.what() << "\n";
        return e.code() == ErrorCode::Config ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "tethersim " << name << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
