#pragma once

// Entanglement-assisted generating power delta~_G, the unassisted bound d_G,
// energy-resolved divergence profiles and the closed-form bounds for mixed
// unitaries and Gaussian-dilatable channels.

#include "nongauss/errors.hpp"
#include "nongauss/fock/conditional_map.hpp"
#include "nongauss/fock/entropy.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/maps.hpp"
#include "nongauss/monotone/input_family.hpp"
#include "nongauss/monotone/optimizer.hpp"
#include "nongauss/monotone/wick.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace nongauss::monotone {

struct MonotoneConfig {
    OptimizerConfig optimizer;
    double trace_tol = fock::kDefaultTraceTol;
    int min_cutoff = 24;
    std::optional<double> energy;  // input energy budget on the map's mode
    double frontier_energy = 4.0;  // budget used by the Fock backend when none is given
    double growth_tol = 5e-3;      // allowed gain between half and full budget
    int stationarity_rays = 10;
    double stationarity_step = 0.05;
};

struct MonotoneResult {
    std::string method;   // delta_tilde, assisted_lower_bound or d_g_bound
    std::string backend;  // analytic, fock or gaussian
    double value = 0.0;
    std::vector<std::string> parameter_names;
    Point argmax;
    std::optional<InputParams> argmax_input;
    int evaluations = 0;
    int infeasible = 0;
    std::vector<TraceEntry> trace;
    double max_trace_deficit = 0.0;
    double tolerance = 0.0;             // objective spread of the final simplex
    double stationarity_ascent = 0.0;   // best gain found on probe rays at the argmax
    double stationarity_variation = 0.0;
    std::optional<double> energy;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Objectives

/// delta_G of (I (x) phi) applied to the input family, evaluated in Fock space
/// at a per-point cutoff. Maps are rebuilt and cached per cutoff.
class FockObjective {
public:
    FockObjective(const maps::MapDescriptor& map, double trace_tol, int min_cutoff)
        : map_(map), tol_(trace_tol), min_cutoff_(min_cutoff) {
        if (map.body().n_in() != 1 || map.body().consumes_mode())
            throw UnsupportedMap("map '" + map.name + "' does not act on a single input mode");
    }

    int cutoff_for(const InputParams& p) const {
        const int raw = std::max(min_cutoff_, input_family_cutoff(p, tol_) + 8);
        return std::min(fock::kMaxCutoff, (raw + 7) / 8 * 8);
    }

    fock::DeltaG evaluate(const InputParams& p) {
        const int d = cutoff_for(p);
        const fock::FockArray in = input_family_fock(p, d, tol_);
        const fock::ConditionalMap& m = at(d);
        if (m.is_single_kraus()) return fock::delta_g_report(fock::apply_map(in, m, 1).state);
        return fock::delta_g_report(fock::apply_map(fock::Ensemble::from_ket(in), m, 1, tol_).state);
    }

    double max_deficit() const { return max_deficit_; }

    double operator()(const InputParams& p) {
        const fock::DeltaG r = evaluate(p);
        max_deficit_ = std::max(max_deficit_, r.trace_deficit);
        return r.value;
    }

private:
    const fock::ConditionalMap& at(int d) {
        auto it = cache_.find(d);
        if (it == cache_.end()) it = cache_.emplace(d, map_.at_cutoff(d).body()).first;
        return it->second;
    }

    const maps::MapDescriptor& map_;
    double tol_;
    int min_cutoff_;
    double max_deficit_ = 0.0;
    std::map<int, fock::ConditionalMap> cache_;
};

namespace detail {

inline const Point& restricted_lower() {
    static const Point lo{0.0, 0.0, 0.0, -kPi, -kPi};
    return lo;
}
inline const Point& restricted_upper() {
    static const Point hi{1.0, 1.0, 1.0, kPi, kPi};
    return hi;
}

/// Phases of alpha only matter for maps that are not phase covariant.
inline std::vector<Point> restricted_lattice(bool phase_sensitive) {
    std::vector<Point> starts;
    const std::vector<double> phases =
        phase_sensitive ? std::vector<double>{0.0, kPi / 2.0, kPi, -kPi / 2.0} : std::vector<double>{0.0};
    for (double te : {1.0, 0.5, 0.15})
        for (double ta : {0.0, 0.5, 1.0})
            for (double tn : {1.0, 0.5, 0.0})
                for (double th : {0.0, kPi / 4.0, kPi / 2.0})
                    for (double ph : phases) {
                        if (ta == 0.0 && ph != 0.0) continue;
                        starts.push_back({te, ta, tn, th, ph});
                    }
    return starts;
}

inline InputParams from_restricted(double budget, const Point& x) {
    return restricted_params(budget, x[0], x[1], x[2], x[3], x[4]);
}

inline InputParams from_free(const Point& x) {
    InputParams p;
    p.alpha = x[0];
    p.theta = x[1];
    p.r = x[2];
    p.n_s = x[3];
    return p;
}

/// Wraps an InputParams objective; branches annihilated by the map count as
/// infeasible points rather than errors.
template <class F>
Objective guarded(F&& f, std::function<InputParams(const Point&)> to_params) {
    return [f = std::forward<F>(f), to_params](const Point& x) mutable {
        try {
            return f(to_params(x));
        } catch (const ZeroProbabilityBranch&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
}

inline void stationarity(MonotoneResult& r, const Objective& f, const Point& lo, const Point& hi, const Point& scale,
                         const MonotoneConfig& cfg) {
    if (r.argmax.empty() || !std::isfinite(r.value)) return;
    std::mt19937_64 rng(cfg.optimizer.seed ^ 0x5a17u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double ascent = 0.0;
    double variation = 0.0;
    for (int k = 0; k < cfg.stationarity_rays; ++k) {
        Point v(r.argmax.size());
        double norm = 0.0;
        for (double& c : v) {
            c = gauss(rng);
            norm += c * c;
        }
        norm = std::sqrt(norm);
        Point x = r.argmax;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += cfg.stationarity_step * scale[i] * v[i] / norm;
        x = detail::clamp_box(x, lo, hi);
        double fx;
        try {
            fx = f(x);
        } catch (const TruncationError&) {
            continue;
        }
        if (!std::isfinite(fx)) continue;
        ascent = std::max(ascent, fx - r.value);
        variation = std::max(variation, std::abs(fx - r.value));
    }
    r.stationarity_ascent = ascent;
    r.stationarity_variation = variation;
}

inline MonotoneResult run(const Objective& f, const std::vector<Point>& starts, const Point& lo, const Point& hi,
                          const Point& step, const MonotoneConfig& cfg, const std::vector<int>& groups = {}) {
    const OptimizeResult o = maximize(f, starts, lo, hi, step, cfg.optimizer, groups);
    MonotoneResult r;
    r.value = o.value;
    r.argmax = o.x;
    r.evaluations = o.evaluations;
    r.infeasible = o.infeasible;
    r.trace = o.trace;
    r.tolerance = o.final_spread;
    r.seed = cfg.optimizer.seed;
    if (!std::isfinite(r.value))
        throw TruncationError("optimizer found no feasible point within the truncation budget", fock::kMaxCutoff);
    stationarity(r, f, lo, hi, step, cfg);
    return r;
}

inline bool analytic_kind(const maps::MapDescriptor& map, Conditioning& which) {
    if (map.name == "pns") {
        which = Conditioning::subtraction;
        return true;
    }
    if (map.name == "pna") {
        which = Conditioning::addition;
        return true;
    }
    return false;
}

inline const Point& restricted_step() {
    static const Point s{0.25, 0.25, 0.25, 0.5, 0.5};
    return s;
}

inline std::vector<std::string> restricted_names() { return {"t_energy", "t_alpha", "t_ns", "theta", "phi"}; }

}  // namespace detail

/// Maximizes `f` over the input family with input energy <= budget.
inline MonotoneResult maximize_restricted(const std::function<double(const InputParams&)>& f, double budget,
                                          const MonotoneConfig& cfg, bool phase_sensitive = true) {
    if (!(budget >= 0.0) || !std::isfinite(budget)) throw InvalidArgument("energy budget must be finite and >= 0");
    auto to_params = [budget](const Point& x) { return detail::from_restricted(budget, x); };
    const Objective obj = detail::guarded(f, to_params);
    const std::vector<Point> starts = detail::restricted_lattice(phase_sensitive);
    std::vector<int> groups;
    for (const Point& x : starts) groups.push_back(static_cast<int>(std::lround(x[0] * 100.0)));
    MonotoneResult r = detail::run(obj, starts, detail::restricted_lower(), detail::restricted_upper(),
                                   detail::restricted_step(), cfg, groups);
    r.parameter_names = detail::restricted_names();
    r.argmax_input = to_params(r.argmax);
    r.energy = budget;
    return r;
}

/// Analytic delta~_G for photon subtraction/addition over the full family
/// (alpha >= 0 by the phase freedom), or over energy <= budget when given.
inline MonotoneResult delta_tilde_analytic(Conditioning which, const MonotoneConfig& cfg) {
    auto f = [which](const InputParams& p) { return analytic_delta(p, which); };
    MonotoneResult r;
    if (cfg.energy) {
        r = maximize_restricted(f, *cfg.energy, cfg, false);
    } else {
        std::vector<Point> starts;
        for (double a : {0.0, 0.5, 1.0, 1.5})
            for (double th : {0.0, kPi / 4.0, kPi / 2.0})
                for (double rr : {0.0, 0.3, 0.6})
                    for (double ns : {0.1, 0.5, 1.0, 2.0}) starts.push_back({a, th, rr, ns});
        const Point lo{0.0, -kPi, 0.0, 0.0};
        const Point hi{3.0, kPi, 1.5, 4.0};
        const Point step{0.25, 0.4, 0.15, 0.3};
        const Objective obj = detail::guarded(f, detail::from_free);
        r = detail::run(obj, starts, lo, hi, step, cfg);
        r.parameter_names = {"alpha", "theta", "r", "n_s"};
        r.argmax_input = detail::from_free(r.argmax);
    }
    r.method = "delta_tilde";
    r.backend = "analytic";
    return r;
}

/// Lower bound on delta~_G: best delta_G of (I (x) phi)(psi) over input-family
/// states with energy <= budget, for any single-mode map.
inline MonotoneResult assisted_lower_bound(const maps::MapDescriptor& map, double budget, const MonotoneConfig& cfg) {
    FockObjective obj(map, cfg.trace_tol, cfg.min_cutoff);
    MonotoneResult r =
        maximize_restricted([&obj](const InputParams& p) { return obj(p); }, budget, cfg, !map.phase_covariant);
    r.method = "assisted_lower_bound";
    r.backend = "fock";
    r.max_trace_deficit = obj.max_deficit();
    return r;
}

namespace detail {

inline void require_conditional_unitary(const maps::MapDescriptor& map, const MonotoneConfig& cfg) {
    if (!map.conditional_unitary)
        throw UnsupportedMap("map '" + map.name + "' is not a conditional unitary; use d_g_bound or divergence_profile");
    if (map.body().is_single_kraus()) return;
    InputParams probe;
    probe.alpha = Complex(0.3, 0.2);
    probe.r = 0.2;
    probe.n_s = 0.5;
    FockObjective obj(map, cfg.trace_tol, cfg.min_cutoff);
    if (obj.evaluate(probe).state_entropy > 1e-6)
        throw UnsupportedMap("map '" + map.name + "' does not keep pure inputs pure");
}

}  // namespace detail

/// delta~_G[phi] = max_p S[lambda_G((I (x) phi) psi_p)] for conditional unitary
/// maps. Photon subtraction/addition use the closed-form moments, Gaussian
/// unitaries the phase-space backend and everything else Fock space.
/// Without an energy budget the Fock backend checks that the value has
/// saturated between half and full `frontier_energy`.
inline MonotoneResult delta_tilde(const maps::MapDescriptor& map, const MonotoneConfig& cfg = {}) {
    detail::require_conditional_unitary(map, cfg);
    Conditioning which;
    if (detail::analytic_kind(map, which)) return delta_tilde_analytic(which, cfg);
    if (map.gaussian) {
        auto f = [](const InputParams& p) { return gaussian::gaussian_entropy(input_family_gaussian(p)); };
        MonotoneResult r = maximize_restricted(f, cfg.energy.value_or(cfg.frontier_energy), cfg, false);
        r.method = "delta_tilde";
        r.backend = "gaussian";
        return r;
    }
    if (cfg.energy) {
        MonotoneResult r = assisted_lower_bound(map, *cfg.energy, cfg);
        r.method = "delta_tilde";
        return r;
    }
    const double e = cfg.frontier_energy;
    const MonotoneResult half = assisted_lower_bound(map, e / 2.0, cfg);
    MonotoneResult full = assisted_lower_bound(map, e, cfg);
    if (full.value - half.value > cfg.growth_tol) {
        const InputParams& p = *full.argmax_input;
        throw TruncationError("delta_tilde: value still growing at the energy frontier (" + std::to_string(half.value) +
                                  " at E=" + std::to_string(e / 2.0) + ", " + std::to_string(full.value) +
                                  " at E=" + std::to_string(e) + ", N_S=" + std::to_string(p.n_s) +
                                  "); use divergence_profile",
                              fock::kMaxCutoff);
    }
    full.method = "delta_tilde";
    return full;
}

// ---------------------------------------------------------------------------
// Unassisted bound

/// Default unentangled Gaussian probes: a coherent grid and squeezed thermal
/// states, expressed as B-marginals of the input family (n_s = thermal photons).
/// With a budget the coherent grid is rescaled and heavier probes are dropped.
inline std::vector<InputParams> default_probes(std::optional<double> budget = std::nullopt) {
    std::vector<InputParams> probes;
    const double amax = budget ? std::sqrt(*budget) : 2.0;
    for (int k = 1; k <= 8; ++k)
        for (double ph : {0.0, kPi / 4.0, kPi / 2.0}) {
            InputParams p;
            p.alpha = std::polar(amax * k / 8.0, ph);
            probes.push_back(p);
        }
    for (double n : {0.0, 0.5, 1.0})
        for (double r : {0.3, 0.6})
            for (double th : {0.0, kPi / 2.0})
                for (double a : {0.0, 1.0}) {
                    InputParams p;
                    p.alpha = a;
                    p.theta = th;
                    p.r = r;
                    p.n_s = n;
                    if (!budget || p.input_energy() <= *budget + 1e-12) probes.push_back(p);
                }
    return probes;
}

namespace detail {

inline fock::DeltaG single_mode_probe(const maps::MapDescriptor& map, const InputParams& p, double tol, int min_cutoff,
                                      std::map<int, fock::ConditionalMap>& cache) {
    const int raw = std::max(min_cutoff, input_family_cutoff(p, tol) + 8);
    const int d = std::min(fock::kMaxCutoff, (raw + 7) / 8 * 8);
    const gaussian::GaussianState g =
        gaussian::partial_trace_gaussian(input_family_gaussian(p), std::vector<int>{1});
    const fock::FockArray in = fock::gaussian_to_fock(g, d, tol);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, map.at_cutoff(d).body()).first;
    return fock::delta_g_report(fock::apply_map(in, it->second, 0).state);
}

inline fock::DeltaG product_coherent_probe(const maps::MapDescriptor& map, Complex a, Complex b, double tol,
                                           int min_cutoff, std::map<int, fock::ConditionalMap>& cache) {
    const double e = std::max(std::norm(a), std::norm(b));
    const int raw = std::max(min_cutoff, static_cast<int>(std::ceil(e + 6.0 * std::sqrt(e))) + 16);
    const int d = std::min(fock::kMaxCutoff, (raw + 7) / 8 * 8);
    const fock::FockArray in = fock::tensor(fock::build_state(fock::StateSpec::coherent(a), d, tol, tol),
                                            fock::build_state(fock::StateSpec::coherent(b), d, tol, tol));
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, map.at_cutoff(d).body()).first;
    return fock::delta_g_report(fock::apply_map(in, it->second, 1).state);
}

}  // namespace detail

/// d_G lower bound: max delta_G(phi(rho)) over the given unentangled Gaussian
/// single-mode inputs (input-family marginals).
inline MonotoneResult d_g_bound(const maps::MapDescriptor& map, const std::vector<InputParams>& inputs,
                                const MonotoneConfig& cfg = {}) {
    if (inputs.empty()) throw InvalidArgument("d_g_bound: empty input set");
    if (map.body().n_in() != 1) throw UnsupportedMap("d_g_bound: single-mode inputs need a single-mode map");
    MonotoneResult r;
    r.method = "d_g_bound";
    r.backend = "fock";
    r.parameter_names = {"alpha_re", "alpha_im", "theta", "r", "n_thermal"};
    r.value = -std::numeric_limits<double>::infinity();
    r.seed = cfg.optimizer.seed;
    r.energy = cfg.energy;
    std::map<int, fock::ConditionalMap> cache;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const InputParams& p = inputs[i];
        p.validate();
        const Point x{p.alpha.real(), p.alpha.imag(), p.theta, p.r, p.n_s};
        double v;
        try {
            const fock::DeltaG dg = detail::single_mode_probe(map, p, cfg.trace_tol, cfg.min_cutoff, cache);
            v = dg.value;
            r.max_trace_deficit = std::max(r.max_trace_deficit, dg.trace_deficit);
        } catch (const TruncationError&) {
            v = -std::numeric_limits<double>::infinity();
            ++r.infeasible;
        } catch (const ZeroProbabilityBranch&) {
            v = -std::numeric_limits<double>::infinity();
        }
        ++r.evaluations;
        r.trace.push_back({static_cast<int>(i), 0, x, v});
        if (v > r.value) {
            r.value = v;
            r.argmax = x;
            r.argmax_input = p;
        }
    }
    if (!std::isfinite(r.value)) throw TruncationError("d_g_bound: no input fits the truncation budget", fock::kMaxCutoff);
    return r;
}

/// d_G lower bound for a map consuming mode A' of a two-mode input (T_alpha):
/// product coherent inputs |a>|b> over a small grid.
inline MonotoneResult d_g_bound_two_mode(const maps::MapDescriptor& map, const MonotoneConfig& cfg = {}) {
    if (map.body().n_in() != 2) throw UnsupportedMap("d_g_bound_two_mode: map must take two input modes");
    MonotoneResult r;
    r.method = "d_g_bound";
    r.backend = "fock";
    r.parameter_names = {"a_re", "a_im", "b_re", "b_im"};
    r.value = -std::numeric_limits<double>::infinity();
    r.seed = cfg.optimizer.seed;
    std::map<int, fock::ConditionalMap> cache;
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    int idx = 0;
    for (double ar : grid)
        for (double ai : {0.0, 0.5})
            for (double br : grid) {
                const Complex a(ar, ai);
                const Complex b(br, 0.0);
                const Point x{ar, ai, br, 0.0};
                double v;
                try {
                    const fock::DeltaG dg = detail::product_coherent_probe(map, a, b, cfg.trace_tol, cfg.min_cutoff, cache);
                    v = dg.value;
                    r.max_trace_deficit = std::max(r.max_trace_deficit, dg.trace_deficit);
                } catch (const ZeroProbabilityBranch&) {
                    v = -std::numeric_limits<double>::infinity();
                }
                ++r.evaluations;
                r.trace.push_back({idx++, 0, x, v});
                if (v > r.value) {
                    r.value = v;
                    r.argmax = x;
                }
            }
    return r;
}

inline MonotoneResult d_g_bound(const maps::MapDescriptor& map, const MonotoneConfig& cfg = {}) {
    if (map.body().n_in() == 2) return d_g_bound_two_mode(map, cfg);
    return d_g_bound(map, default_probes(cfg.energy), cfg);
}

// ---------------------------------------------------------------------------
// Classification

enum class ProfileClass { finite, diverging, inconclusive };

inline const char* to_string(ProfileClass c) {
    switch (c) {
        case ProfileClass::finite: return "finite";
        case ProfileClass::diverging: return "diverging";
        case ProfileClass::inconclusive: break;
    }
    return "inconclusive";
}

struct ProfileConfig {
    MonotoneConfig monotone;
    double slope_min = 0.5;
    double plateau_tol = 0.05;
};

struct DivergenceProfile {
    std::string map;
    std::vector<double> energy;
    std::vector<double> delta;
    std::vector<std::string> method;  // per grid point
    std::vector<double> deficit;
    double slope = 0.0;               // d delta / d log2 E over the top half
    double plateau = 0.0;             // mean delta over the top half
    double plateau_spread = 0.0;
    bool monotone_increase = false;
    ProfileClass classification = ProfileClass::inconclusive;
};

/// Least-squares slope of y against log2(x).
inline double log2_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log2(x[i]);
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log2(x[i]) - mx;
        sxy += dx * (y[i] - my);
        sxx += dx * dx;
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Best available lower bound at each energy: delta~_G restricted to the budget
/// for conditional unitaries, otherwise the larger of the assisted bound and
/// the unassisted d_G bound.
inline DivergenceProfile divergence_profile(const maps::MapDescriptor& map, const std::vector<double>& grid,
                                            const ProfileConfig& cfg = {}) {
    if (grid.size() < 4) throw InvalidArgument("divergence_profile: grid needs at least 4 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidArgument("divergence_profile: energies must be > 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("divergence_profile: grid must be strictly increasing");
    }
    DivergenceProfile prof;
    prof.map = map.name;
    prof.energy = grid;
    for (double e : grid) {
        MonotoneConfig c = cfg.monotone;
        c.energy = e;
        MonotoneResult best;
        if (map.conditional_unitary) {
            best = delta_tilde(map, c);
        } else {
            best = assisted_lower_bound(map, e, c);
            try {
                MonotoneResult dg = d_g_bound(map, c);
                if (dg.value > best.value) best = std::move(dg);
            } catch (const TruncationError&) {
            }
        }
        prof.delta.push_back(std::max(0.0, best.value));
        prof.method.push_back(best.method);
        prof.deficit.push_back(best.max_trace_deficit);
    }
    const std::size_t half = grid.size() / 2;
    const std::vector<double> xs(grid.begin() + static_cast<long>(half), grid.end());
    const std::vector<double> ys(prof.delta.begin() + static_cast<long>(half), prof.delta.end());
    prof.slope = log2_slope(xs, ys);
    const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
    prof.plateau_spread = *mx - *mn;
    prof.plateau = 0.0;
    for (double y : ys) prof.plateau += y / static_cast<double>(ys.size());
    prof.monotone_increase = true;
    for (std::size_t i = 1; i < prof.delta.size(); ++i)
        if (prof.delta[i] <= prof.delta[i - 1]) prof.monotone_increase = false;
    if (prof.slope >= cfg.slope_min && prof.monotone_increase)
        prof.classification = ProfileClass::diverging;
    else if (prof.plateau_spread <= cfg.plateau_tol)
        prof.classification = ProfileClass::finite;
    else
        prof.classification = ProfileClass::inconclusive;
    return prof;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline double shannon_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

/// delta~_G of a mixture of Gaussian unitaries lies in [S_max - h(p), S_max].
inline Interval mixed_unitary_bounds(const std::vector<double>& probabilities, double s_g_max) {
    if (probabilities.empty()) throw InvalidArgument("mixed_unitary_bounds: empty distribution");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("mixed_unitary_bounds: probabilities must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixed_unitary_bounds: probabilities must sum to 1");
    if (!(s_g_max >= 0.0)) throw InvalidArgument("mixed_unitary_bounds: S_G_max must be >= 0");
    return {std::max(0.0, s_g_max - shannon_entropy(probabilities)), s_g_max};
}

struct GdBound {
    double bound = 0.0;          // delta_G of the environment state
    double sampled_max = 0.0;    // largest delta_G over sampled assisted outputs
    int samples = 0;
    double max_trace_deficit = 0.0;
    bool satisfied = true;       // sampled_max <= bound + slack
};

/// Samples the input family: vacuum, a TMSV probe and `n_random` seeded draws
/// with N_S <= 1, r <= 0.5, |alpha| <= 1.
inline std::vector<InputParams> sample_inputs(int n_random, std::uint64_t seed) {
    std::vector<InputParams> out(1);
    InputParams tmsv;
    tmsv.n_s = 1.0;
    out.push_back(tmsv);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < n_random; ++k) {
        InputParams p;
        p.n_s = u(rng);
        p.r = 0.5 * u(rng);
        p.theta = 2.0 * kPi * u(rng);
        p.alpha = std::polar(u(rng), 2.0 * kPi * u(rng));
        out.push_back(p);
    }
    return out;
}

/// delta~_G[phi_GD] <= delta_G[psi_E], with the sampled check on the input family.
inline GdBound gd_upper_bound(const maps::MapDescriptor& map, int n_random = 12, std::uint64_t seed = 1,
                              double trace_tol = fock::kDefaultTraceTol, double slack = 1e-3) {
    if (!map.dilation) throw InvalidArgument("gd_upper_bound: map carries no dilation");
    const fock::StateSpec& env = map.dilation->env;
    const int d_env = std::max(16, fock::required_cutoff(env, 1e-10, 8) + 4);
    GdBound g;
    g.bound = fock::delta_g(fock::build_state(env, d_env, 1e-10, trace_tol));
    FockObjective obj(map, trace_tol, 24);
    g.sampled_max = 0.0;
    for (const InputParams& p : sample_inputs(n_random, seed)) {
        g.sampled_max = std::max(g.sampled_max, obj(p));
        ++g.samples;
    }
    g.max_trace_deficit = obj.max_deficit();
    g.satisfied = g.sampled_max <= g.bound + slack;
    return g;
}

/// n g(E/n): the largest entropy of n modes carrying E photons in total.
inline double energy_ceiling(double energy, int n_modes) {
    return n_modes * gaussian::thermal_entropy(std::max(0.0, energy) / n_modes);
}

}  // namespace nongauss::monotone
