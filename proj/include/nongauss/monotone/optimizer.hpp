#pragma once

// Deterministic multi-start Nelder-Mead maximization over a box.

#include "nongauss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace nongauss::monotone {

using Point = std::vector<double>;

struct OptimizerConfig {
    std::uint64_t seed = 1;
    int max_iter = 300;
    double ftol = 1e-10;
    double xtol = 1e-8;
    int refine_top = 4;     // starts refined by the simplex; 0 refines all
    double jitter = 1e-3;   // seeded perturbation of starts, as a fraction of the step
    int refine_per_group = 1;  // best starts of each group refined in addition to the top ones
};

struct TraceEntry {
    int start = 0;
    int iteration = 0;
    Point x;
    double value = 0.0;
};

struct OptimizeResult {
    Point x;
    double value = -std::numeric_limits<double>::infinity();
    int evaluations = 0;
    int infeasible = 0;        // evaluations rejected by truncation
    double final_spread = 0.0; // objective range of the winning simplex
    std::vector<TraceEntry> trace;
};

using Objective = std::function<double(const Point&)>;

namespace detail {

inline Point clamp_box(Point x, const Point& lo, const Point& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

class Evaluator {
public:
    Evaluator(const Objective& f, OptimizeResult& out) : f_(f), out_(out) {}

    double operator()(const Point& x, int start, int iter) {
        double v;
        try {
            v = f_(x);
        } catch (const TruncationError&) {
            v = -std::numeric_limits<double>::infinity();
            ++out_.infeasible;
        }
        if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
        ++out_.evaluations;
        out_.trace.push_back({start, iter, x, v});
        if (v > out_.value) {
            out_.value = v;
            out_.x = x;
        }
        return v;
    }

private:
    const Objective& f_;
    OptimizeResult& out_;
};

/// Maximizes from x0; returns the objective spread of the final simplex.
inline double nelder_mead(Evaluator& eval, const Point& x0, double f0, const Point& step, const Point& lo,
                          const Point& hi, const OptimizerConfig& cfg, int start) {
    const std::size_t n = x0.size();
    std::vector<Point> simplex{x0};
    std::vector<double> f{f0};
    for (std::size_t i = 0; i < n; ++i) {
        Point x = x0;
        x[i] += step[i];
        if (x[i] > hi[i]) x[i] = x0[i] - step[i];
        x = clamp_box(x, lo, hi);
        simplex.push_back(x);
        f.push_back(eval(x, start, 0));
    }
    std::vector<std::size_t> order(n + 1);
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];
        double size = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(simplex[k][i] - simplex[best][i]));
        const double spread = f[best] - f[worst];
        if ((std::isfinite(spread) && spread <= cfg.ftol) || size <= cfg.xtol) break;

        Point centroid(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k)
            if (k != worst)
                for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
        auto along = [&](double t) {
            Point x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
            return clamp_box(x, lo, hi);
        };
        const Point xr = along(-1.0);
        const double fr = eval(xr, start, iter);
        if (fr > f[best]) {
            const Point xe = along(-2.0);
            const double fe = eval(xe, start, iter);
            if (fe > fr) {
                simplex[worst] = xe;
                f[worst] = fe;
            } else {
                simplex[worst] = xr;
                f[worst] = fr;
            }
        } else if (fr > f[second]) {
            simplex[worst] = xr;
            f[worst] = fr;
        } else {
            const bool outside = fr > f[worst];
            const Point xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc, start, iter);
            if (fc > std::max(fr, f[worst]) || (outside && fc >= fr)) {
                simplex[worst] = xc;
                f[worst] = fc;
            } else {
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[k][i] = simplex[best][i] + 0.5 * (simplex[k][i] - simplex[best][i]);
                    simplex[k] = clamp_box(simplex[k], lo, hi);
                    f[k] = eval(simplex[k], start, iter);
                }
            }
        }
    }
    const auto [mn, mx] = std::minmax_element(f.begin(), f.end());
    return std::isfinite(*mn) ? *mx - *mn : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Evaluates every start, then refines the best `refine_top` with Nelder-Mead,
/// plus the best `refine_per_group` of every group when starts are grouped.
/// Ties are broken by start index so the result depends only on the seed.
inline OptimizeResult maximize(const Objective& f, const std::vector<Point>& starts, const Point& lo, const Point& hi,
                               const Point& step, const OptimizerConfig& cfg, const std::vector<int>& groups = {}) {
    if (starts.empty()) throw InvalidArgument("maximize: no starting points");
    OptimizeResult out;
    detail::Evaluator eval(f, out);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Point> jittered;
    std::vector<double> values;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        Point x = starts[s];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += cfg.jitter * step[i] * unit(rng);
        x = detail::clamp_box(x, lo, hi);
        jittered.push_back(x);
        values.push_back(eval(x, static_cast<int>(s), 0));
    }
    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const std::size_t n_refine =
        cfg.refine_top <= 0 ? order.size() : std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg.refine_top));
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<long>(n_refine));
    if (!groups.empty()) {
        if (groups.size() != starts.size()) throw InvalidArgument("maximize: one group per start expected");
        std::map<int, int> taken;
        for (std::size_t s : order) {
            if (taken[groups[s]] >= cfg.refine_per_group) continue;
            ++taken[groups[s]];
            if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) chosen.push_back(s);
        }
    }
    double spread_of_best = 0.0;
    double best_after = -std::numeric_limits<double>::infinity();
    for (const std::size_t s : chosen) {
        if (!std::isfinite(values[s])) continue;
        const double before = out.value;
        const double spread = detail::nelder_mead(eval, jittered[s], values[s], step, lo, hi, cfg, static_cast<int>(s));
        if (out.value > best_after || out.value > before) {
            best_after = out.value;
            spread_of_best = spread;
        }
    }
    out.final_spread = spread_of_best;
    return out;
}

}  // namespace nongauss::monotone
