// nongauss: non-Gaussianity of bosonic states and maps from the command line.
//
//   nongauss state-ng fock:1
//   nongauss map-ng pns
//   nongauss map-ng gd:bs0.5,env=fock1 --bound
//   nongauss sweep bps --grid 1,2,4,8 --format csv
//   nongauss verify lemma1 --seed 7

#include "nongauss/cli/commands.hpp"

#include "CLI11.hpp"

#include <exception>
#include <fstream>
#include <iostream>

namespace {

using nongauss::cli::RunConfig;
using nongauss::cli::RunReport;

int emit(const RunConfig& cfg, const RunReport& r, const std::string& out_path) {
    const std::string text = (cfg.format == "csv" && r.json.find("error") == r.json.end()) ? r.csv : r.json.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "nongauss: cannot write " << out_path << "\n";
            return nongauss::cli::kExitUsage;
        }
        f << text;
    }
    if (const auto e = r.json.find("error"); e != r.json.end())
        std::cerr << "nongauss: " << (*e)["message"].get<std::string>() << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Gaussianity of bosonic states and operations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nongauss::cli::kVersion);

    RunConfig cfg;
    int cutoff = 0;
    std::string out_path;
    app.add_option("--cutoff", cutoff, "Fock cutoff D (>= 8)");
    app.add_option("--seed", cfg.seed, "optimizer and sampler seed")->capture_default_str();
    app.add_option("--trace-tol", cfg.trace_tol, "allowed truncation deficit")->capture_default_str();
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_option("--format", cfg.format, "json or csv (csv for sweep only)")->capture_default_str();

    auto* state = app.add_subcommand("state-ng", "delta_G of a named state");
    state->add_option("state", cfg.target, "fock:n coherent:re[,im] thermal:N tmsv:NS cat:alpha")->required();

    auto* map = app.add_subcommand("map-ng", "delta~_G of a conditional unitary map, or the d_G bound otherwise");
    map->add_option("map", cfg.target, "pns pna bps kerr[:gamma] talpha:re[,im] gd:bs<tau>,env=<state> id")->required();
    map->add_flag("--bound", cfg.bound, "Gaussian-dilatable upper bound with sampled check");
    std::optional<double> energy;
    map->add_option("--energy", energy, "input energy budget");

    auto* sweep = app.add_subcommand("sweep", "finite vs diverging classification over an energy grid");
    sweep->add_option("map", cfg.target, "map spec")->required();
    sweep->add_option("--grid", cfg.grid, "energies, strictly increasing")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "sampled property suites");
    verify->add_option("suite", cfg.target, "state-props lemma1 counterexamples relent monotone-props")->required();

    // Global options may also follow the subcommand.
    for (CLI::App* sub : {state, map, sweep, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nongauss::cli::kExitUsage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cutoff != 0 || app.count("--cutoff") > 0) cfg.cutoff = cutoff;
    cfg.energy = energy;

    try {
        return emit(cfg, nongauss::cli::run_guarded(cfg), out_path);
    } catch (const std::exception& e) {
        std::cerr << "nongauss: " << e.what() << "\n";
        return nongauss::cli::kExitNumerical;
    }
}
