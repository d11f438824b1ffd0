#pragma once

// Commands behind the nongauss executable. Each returns a RunReport holding the
// JSON document, an optional CSV table and the process exit code.

#include "nongauss/cli/registry.hpp"
#include "nongauss/cli/suites.hpp"
#include "nongauss/errors.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/maps.hpp"
#include "nongauss/monotone/delta_tilde.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nongauss::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nongauss/1";
inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kMinCliCutoff = 8;
inline constexpr int kDefaultMapCutoff = 24;
inline constexpr int kDefaultStateCutoff = 30;

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitNumerical = 3 };

struct RunConfig {
    std::string command;
    std::string target;  // state spec, map spec or suite name
    std::optional<int> cutoff;
    std::uint64_t seed = 1;
    double trace_tol = fock::kDefaultTraceTol;
    std::vector<double> grid;
    std::optional<double> energy;
    bool bound = false;
    std::string format = "json";
};

struct RunReport {
    Json json;
    std::string csv;
    int exit_code = kExitOk;
};

namespace detail {

inline Json measured(double value, const char* key, double err) {
    Json j;
    j["value"] = value;
    j[key] = err;
    return j;
}

inline Json config_echo(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["target"] = c.target;
    if (c.cutoff) j["cutoff"] = *c.cutoff;
    else j["cutoff"] = nullptr;
    j["seed"] = c.seed;
    j["trace_tol"] = c.trace_tol;
    if (!c.grid.empty()) j["grid"] = c.grid;
    if (c.energy) j["energy"] = *c.energy;
    if (c.command == "map-ng") j["bound"] = c.bound;
    j["format"] = c.format;
    return j;
}

inline Json header(const RunConfig& c) {
    Json j;
    j["schema"] = kSchema;
    j["tool"] = {{"name", "nongauss"}, {"version", kVersion}};
    j["config"] = config_echo(c);
    return j;
}

inline int checked_cutoff(const RunConfig& c, int fallback) {
    const int d = c.cutoff.value_or(fallback);
    if (d < kMinCliCutoff) throw UsageError("--cutoff must be >= " + std::to_string(kMinCliCutoff));
    if (d > fock::kMaxCutoff) throw UsageError("--cutoff must be <= " + std::to_string(fock::kMaxCutoff));
    return d;
}

inline monotone::MonotoneConfig monotone_config(const RunConfig& c) {
    monotone::MonotoneConfig m;
    m.optimizer.seed = c.seed;
    m.trace_tol = c.trace_tol;
    m.min_cutoff = checked_cutoff(c, kDefaultMapCutoff);
    m.energy = c.energy;
    return m;
}

inline Json monotone_json(const monotone::MonotoneResult& r) {
    Json j;
    j["method"] = r.method;
    j["backend"] = r.backend;
    Json v = measured(r.value, "tolerance", r.tolerance);
    v["deficit"] = r.max_trace_deficit;
    j["value"] = std::move(v);
    Json arg = Json::object();
    for (std::size_t i = 0; i < r.parameter_names.size() && i < static_cast<std::size_t>(r.argmax.size()); ++i)
        arg[r.parameter_names[i]] = r.argmax[static_cast<Eigen::Index>(i)];
    j["argmax"] = std::move(arg);
    if (r.argmax_input) {
        const monotone::InputParams& p = *r.argmax_input;
        j["argmax_input"] = {{"alpha_re", p.alpha.real()}, {"alpha_im", p.alpha.imag()}, {"theta", p.theta},
                             {"r", p.r},                   {"n_s", p.n_s}};
    }
    j["stationarity"] = {{"ascent", r.stationarity_ascent}, {"variation", r.stationarity_variation}};
    j["evaluations"] = r.evaluations;
    j["infeasible"] = r.infeasible;
    if (r.energy) j["energy"] = *r.energy;
    else j["energy"] = nullptr;
    j["seed"] = r.seed;
    return j;
}

}  // namespace detail

inline std::vector<double> default_grid(const std::string& map) {
    if (map == "pns" || map == "pna") return {0.5, 1.0, 2.0, 4.0};
    if (map == "kerr" || detail::starts_with(map, "kerr:")) return {1.0, 2.0, 4.0, 6.0};
    return {1.0, 2.0, 4.0, 8.0};
}

inline RunReport cmd_state_ng(const RunConfig& c) {
    const fock::StateSpec spec = parse_state_spec(c.target);
    const double bound = c.trace_tol;
    const int d = detail::checked_cutoff(c, std::max(kDefaultStateCutoff, fock::required_cutoff(spec, bound, kMinCliCutoff)));
    const fock::FockArray f = fock::build_state(spec, d, bound, c.trace_tol);
    const fock::DeltaG dg = fock::delta_g_report(f);
    RunReport out;
    out.json = detail::header(c);
    Json res;
    res["cutoff"] = d;
    res["n_modes"] = f.n_modes();
    res["delta_g"] = detail::measured(dg.value, "deficit", dg.trace_deficit);
    res["gaussian_entropy"] = detail::measured(dg.gaussian_entropy, "deficit", dg.trace_deficit);
    res["state_entropy"] = detail::measured(dg.state_entropy, "deficit", dg.trace_deficit);
    out.json["result"] = std::move(res);
    return out;
}

inline RunReport cmd_map_ng(const RunConfig& c) {
    const monotone::MonotoneConfig cfg = detail::monotone_config(c);
    const maps::MapDescriptor map = parse_map_spec(c.target, cfg.min_cutoff);
    RunReport out;
    out.json = detail::header(c);
    Json res;
    res["map"] = map.name;
    if (c.bound) {
        if (!map.dilation) throw UsageError("--bound needs a Gaussian-dilatable map (gd:...)");
        const monotone::GdBound g = monotone::gd_upper_bound(map, 12, c.seed, c.trace_tol);
        res["method"] = "gd_upper_bound";
        res["bound"] = detail::measured(g.bound, "tolerance", 1e-3);
        res["sampled_max"] = detail::measured(g.sampled_max, "deficit", g.max_trace_deficit);
        res["samples"] = g.samples;
        res["satisfied"] = g.satisfied;
    } else {
        const monotone::MonotoneResult r =
            map.conditional_unitary ? monotone::delta_tilde(map, cfg) : monotone::d_g_bound(map, cfg);
        const Json j = detail::monotone_json(r);
        for (const auto& [k, v] : j.items()) res[k] = v;
    }
    out.json["result"] = std::move(res);
    return out;
}

inline RunReport cmd_sweep(const RunConfig& c) {
    monotone::ProfileConfig pc;
    pc.monotone = detail::monotone_config(c);
    const maps::MapDescriptor map = parse_map_spec(c.target, pc.monotone.min_cutoff);
    const std::vector<double> grid = c.grid.empty() ? default_grid(c.target) : c.grid;
    const monotone::DivergenceProfile p = monotone::divergence_profile(map, grid, pc);
    RunReport out;
    RunConfig echo = c;
    echo.grid = grid;
    out.json = detail::header(echo);
    double worst = 0.0;
    Json points = Json::array();
    for (std::size_t i = 0; i < p.energy.size(); ++i) {
        worst = std::max(worst, p.deficit[i]);
        points.push_back({{"energy", p.energy[i]},
                          {"delta", detail::measured(p.delta[i], "deficit", p.deficit[i])},
                          {"method", p.method[i]}});
    }
    Json res;
    res["map"] = p.map;
    res["points"] = std::move(points);
    Json slope = detail::measured(p.slope, "deficit", worst);
    slope["threshold"] = pc.slope_min;
    res["slope_fit"] = std::move(slope);
    Json plateau = detail::measured(p.plateau, "tolerance", pc.plateau_tol);
    plateau["spread"] = p.plateau_spread;
    res["plateau"] = std::move(plateau);
    res["monotone_increase"] = p.monotone_increase;
    res["classification"] = monotone::to_string(p.classification);
    out.json["result"] = std::move(res);

    std::ostringstream csv;
    csv.precision(10);
    csv << "energy,delta,slope_fit,classification\n";
    for (std::size_t i = 0; i < p.energy.size(); ++i)
        csv << p.energy[i] << ',' << p.delta[i] << ',' << p.slope << ',' << monotone::to_string(p.classification) << '\n';
    out.csv = csv.str();
    return out;
}

inline std::vector<std::string> suite_names() {
    return {"state-props", "lemma1", "counterexamples", "relent", "monotone-props"};
}

inline RunReport cmd_verify(const RunConfig& c) {
    std::vector<Assertion> v;
    if (c.target == "state-props") v = suite_state_props(c.seed);
    else if (c.target == "lemma1") v = suite_loss_commutation(c.seed);
    else if (c.target == "counterexamples") v = suite_counterexamples();
    else if (c.target == "relent") v = suite_relent(c.seed);
    else if (c.target == "monotone-props") v = suite_monotone_props(c.seed);
    else throw UsageError("unknown suite '" + c.target + "'");
    RunReport out;
    out.json = detail::header(c);
    Json list = Json::array();
    for (const Assertion& a : v)
        list.push_back({{"name", a.name},
                        {"value", a.value},
                        {"deviation", a.deviation},
                        {"tolerance", a.tolerance},
                        {"pass", a.pass}});
    const bool ok = all_pass(v);
    out.json["result"] = {{"suite", c.target}, {"assertions", std::move(list)}, {"all_pass", ok}};
    out.exit_code = ok ? kExitOk : kExitVerifyFailed;
    return out;
}

/// Runs a command and maps library errors to exit codes. Wall time goes under
/// "timestamp" so the rest of the document is reproducible.
inline RunReport run(const RunConfig& c) {
    if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
    if (c.format == "csv" && c.command != "sweep") throw UsageError("csv output is only available for sweep");
    if (!(c.trace_tol > 0.0) || !(c.trace_tol < 1.0)) throw UsageError("--trace-tol must lie in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    RunReport r;
    if (c.command == "state-ng") r = cmd_state_ng(c);
    else if (c.command == "map-ng") r = cmd_map_ng(c);
    else if (c.command == "sweep") r = cmd_sweep(c);
    else if (c.command == "verify") r = cmd_verify(c);
    else throw UsageError("unknown command '" + c.command + "'");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.json["timestamp"] = {{"wall_time_s", wall}};
    return r;
}

/// run() with errors turned into a report carrying the exit code.
inline RunReport run_guarded(const RunConfig& c) {
    auto fail = [&](int code, const char* kind, const std::string& what) {
        RunReport r;
        r.json = detail::header(c);
        r.json["error"] = {{"kind", kind}, {"message", what}};
        r.exit_code = code;
        return r;
    };
    try {
        return run(c);
    } catch (const UsageError& e) {
        return fail(kExitUsage, "usage", e.what());
    } catch (const InvalidArgument& e) {
        return fail(kExitUsage, "invalid_argument", e.what());
    } catch (const UnsupportedMap& e) {
        return fail(kExitUsage, "unsupported_map", e.what());
    } catch (const TruncationError& e) {
        RunReport r = fail(kExitNumerical, "truncation", e.what());
        r.json["error"]["suggested_cutoff"] = e.suggested_cutoff();
        return r;
    } catch (const Error& e) {
        return fail(kExitNumerical, "numerical", e.what());
    }
}

}  // namespace nongauss::cli
