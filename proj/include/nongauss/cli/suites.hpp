#pragma once

// Sampled verification suites. Each assertion carries the measured deviation
// and the tolerance it is held to; an assertion passes iff deviation <= tolerance.

#include "nongauss/errors.hpp"
#include "nongauss/fock/conditional_map.hpp"
#include "nongauss/fock/entropy.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/maps.hpp"
#include "nongauss/monotone/delta_tilde.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace nongauss::cli {

struct Assertion {
    std::string name;
    double value = 0.0;      // the quantity itself
    double deviation = 0.0;  // distance from the expected value or violation of the bound
    double tolerance = 0.0;
    bool pass = false;
};

inline Assertion check(std::string name, double value, double deviation, double tolerance) {
    const bool ok = std::isfinite(deviation) && deviation <= tolerance;
    return {std::move(name), value, deviation, tolerance, ok};
}

/// |value - expected| <= tol
inline Assertion check_close(std::string name, double value, double expected, double tol) {
    return check(std::move(name), value, std::abs(value - expected), tol);
}

/// value <= bound + tol, reported as the violation max(0, value - bound)
inline Assertion check_below(std::string name, double value, double bound, double tol) {
    return check(std::move(name), value, std::max(0.0, value - bound), tol);
}

inline bool all_pass(const std::vector<Assertion>& v) {
    return std::all_of(v.begin(), v.end(), [](const Assertion& a) { return a.pass; });
}

// ---------------------------------------------------------------------------
// Seeded samplers

using Rng = std::mt19937_64;

inline CMat random_unitary(int n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR();
    for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
    return q;
}

/// O1 * (squeezers with |r| <= r_max) * O2 with random passive O1, O2.
inline gaussian::SymplecticOp random_symplectic(int n, Rng& rng, double r_max) {
    std::uniform_real_distribution<double> u(-r_max, r_max);
    RMat s = RMat::Identity(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        const double r = u(rng);
        s(2 * k, 2 * k) = std::exp(-r);
        s(2 * k + 1, 2 * k + 1) = std::exp(r);
    }
    const RMat o1 = gaussian::unitary_to_passive(random_unitary(n, rng));
    const RMat o2 = gaussian::unitary_to_passive(random_unitary(n, rng));
    return gaussian::SymplecticOp::make(o1 * s * o2, RVec::Zero(2 * n));
}

/// Random low-energy Gaussian state: thermal product, random symplectic, displacement.
inline gaussian::GaussianState random_gaussian(int n, Rng& rng, double nu_max = 2.0, double r_max = 0.3,
                                               double shift = 0.6) {
    std::uniform_real_distribution<double> nu(1.0, nu_max);
    std::uniform_real_distribution<double> d(-shift, shift);
    RMat cov = RMat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) cov(2 * k, 2 * k) = cov(2 * k + 1, 2 * k + 1) = nu(rng);
    gaussian::GaussianState g = gaussian::apply_symplectic(gaussian::GaussianState::make(RVec::Zero(2 * n), cov),
                                                           random_symplectic(n, rng, r_max));
    RVec mean(2 * n);
    for (int i = 0; i < 2 * n; ++i) mean(i) = d(rng);
    return gaussian::GaussianState::make(mean, g.cov());
}

/// Random ket supported on the lowest `levels` Fock levels of each mode.
inline fock::FockArray random_ket(int n_modes, int d, int levels, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVec psi = CVec::Zero(fock::ipow(d, n_modes));
    const long span = fock::ipow(levels, n_modes);
    for (long k = 0; k < span; ++k) {
        long idx = 0;
        long rest = k;
        for (int m = 0; m < n_modes; ++m) {
            idx = idx * d + rest % levels;
            rest /= levels;
        }
        psi(idx) = Complex(g(rng), g(rng));
    }
    return fock::FockArray::ket(psi, n_modes, d);
}

/// Random full-rank density matrix (Wishart with a small identity admixture).
inline fock::FockArray random_density(int n_modes, int d, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const long n = fock::ipow(d, n_modes);
    CMat z(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    CMat rho = z * z.adjoint() + 0.05 * static_cast<double>(n) * CMat::Identity(n, n);
    return fock::FockArray::density(rho / rho.trace().real(), n_modes, d);
}

namespace detail {

inline double moment_gap(const gaussian::GaussianState& a, const gaussian::GaussianState& b) {
    return std::max((a.mean() - b.mean()).cwiseAbs().maxCoeff(), (a.cov() - b.cov()).cwiseAbs().maxCoeff());
}

/// Pure loss acting on the phase-space description: beamsplitter with vacuum, trace the environment.
inline gaussian::GaussianState loss_gaussian(const gaussian::GaussianState& g, double tau) {
    const gaussian::GaussianState joint =
        gaussian::apply_symplectic(gaussian::tensor(g, gaussian::GaussianState::vacuum(1)), gaussian::beamsplitter(2, 0, 1, tau));
    return gaussian::partial_trace_gaussian(joint, std::vector<int>{0});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// state-props: A1-A5

inline std::vector<Assertion> suite_state_props(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Assertion> out;
    // A1: zero on Gaussian states, non-negative elsewhere.
    double worst_gauss = 0.0;
    for (int k = 0; k < 20; ++k) {
        const int n = 1 + k % 2;
        const int d = n == 1 ? 40 : 20;
        const gaussian::GaussianState g = n == 1 ? random_gaussian(1, rng) : random_gaussian(2, rng, 1.4, 0.2, 0.4);
        worst_gauss = std::max(worst_gauss, fock::delta_g(fock::gaussian_to_fock(g, d, 1e-6)));
    }
    out.push_back(check("A1 delta_G of 20 Gaussian states", worst_gauss, worst_gauss, 1e-4));
    double most_negative = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
        const fock::FockArray psi = random_ket(1, 20, 5, rng);
        const fock::DeltaG r = fock::delta_g_report(psi.to_density());
        most_negative = std::min(most_negative, r.gaussian_entropy - r.state_entropy);
    }
    out.push_back(check("A1 delta_G >= 0 on 10 non-Gaussian states", most_negative, std::max(0.0, -most_negative), 1e-6));

    // A2: additivity on products.
    double worst_add = 0.0;
    for (int k = 0; k < 4; ++k) {
        const fock::FockArray a = random_ket(1, 25, 4, rng);
        const fock::FockArray b = random_ket(1, 25, 4, rng);
        const double gap = std::abs(fock::delta_g(fock::tensor(a, b)) - fock::delta_g(a) - fock::delta_g(b));
        worst_add = std::max(worst_add, gap);
    }
    out.push_back(check("A2 additivity on 4 product states", worst_add, worst_add, 1e-3));

    // A3: convexity among states sharing lambda_G. |1>, thermal(1) and
    // (|0><0| + |2><2|)/2 all Gaussify to thermal(1).
    {
        const int d = 40;
        const CMat one = fock::build_state(fock::StateSpec::fock_n(1), d).to_density().density_data();
        const CMat th = fock::build_state(fock::StateSpec::thermal(1.0), d, 1e-6).density_data();
        CMat mix02 = CMat::Zero(d, d);
        mix02(0, 0) = mix02(2, 2) = 0.5;
        const std::vector<CMat> parts{one, th, mix02};
        std::vector<double> dg;
        for (const CMat& p : parts) dg.push_back(fock::delta_g(fock::FockArray::density(p, 1, d, 0.0, 1e-6)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 5; ++k) {
            std::vector<double> w{u(rng), u(rng), u(rng)};
            const double s = w[0] + w[1] + w[2];
            CMat rho = CMat::Zero(d, d);
            double rhs = 0.0;
            for (int j = 0; j < 3; ++j) {
                rho += (w[j] / s) * parts[j];
                rhs += (w[j] / s) * dg[j];
            }
            worst = std::max(worst, fock::delta_g(fock::FockArray::density(rho, 1, d, 0.0, 1e-6)) - rhs);
        }
        out.push_back(check_below("A3 convexity at fixed lambda_G", worst, 0.0, 1e-6));
    }

    // A4: invariance under Gaussian unitaries.
    {
        const int d = 40;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 6; ++k) {
            const fock::FockArray psi = random_ket(1, d, 4, rng);
            const double before = fock::delta_g(psi);
            fock::OperatorChain chain(1, d);
            chain.then_local(0, fock::squeeze_matrix(0.3 * u(rng), d));
            chain.then_local(0, fock::rotation_matrix(kPi * u(rng), d));
            chain.then_local(0, fock::displacement_matrix(Complex(0.5 * u(rng), 0.5 * u(rng)), d));
            const fock::FockArray moved = fock::FockArray::ket(chain.apply(psi.ket_data()), 1, d, 0.0, 1e-4);
            worst = std::max(worst, std::abs(fock::delta_g(moved) - before));
        }
        out.push_back(check("A4 invariance under D R S on 6 states", worst, worst, 1e-3));
    }

    // A5: partial trace does not increase delta_G.
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 6; ++k) {
            const fock::FockArray psi = random_ket(2, 12, 3, rng);
            const fock::FockArray rho = psi.to_density();
            const double reduced = fock::delta_g(fock::partial_trace(rho, 1));
            worst = std::max(worst, reduced - fock::delta_g(rho));
        }
        out.push_back(check_below("A5 partial trace monotonicity", worst, 0.0, 1e-3));
    }
    return out;
}

// ---------------------------------------------------------------------------
// relent: relative-entropy properties and the two delta_G routes

inline std::vector<Assertion> suite_relent(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Assertion> out;
    double min_rel = std::numeric_limits<double>::infinity();
    double worst_add = 0.0;
    double worst_mono = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
        const fock::FockArray r1 = random_density(1, 4, rng);
        const fock::FockArray s1 = random_density(1, 4, rng);
        const fock::FockArray r2 = random_density(1, 4, rng);
        const fock::FockArray s2 = random_density(1, 4, rng);
        const double d1 = fock::relative_entropy(r1, s1);
        const double d2 = fock::relative_entropy(r2, s2);
        const fock::FockArray r12 = fock::tensor(r1, r2);
        const fock::FockArray s12 = fock::tensor(s1, s2);
        const double joint = fock::relative_entropy(r12, s12);
        min_rel = std::min({min_rel, d1, d2});
        worst_add = std::max(worst_add, std::abs(joint - d1 - d2));

        const fock::FockArray rho = random_density(2, 4, rng);
        const fock::FockArray sigma = random_density(2, 4, rng);
        const double full = fock::relative_entropy(rho, sigma);
        const double part = fock::relative_entropy(fock::partial_trace(rho, 1), fock::partial_trace(sigma, 1));
        min_rel = std::min(min_rel, full);
        worst_mono = std::max(worst_mono, part - full);
    }
    out.push_back(check("relative entropy non-negative", min_rel, std::max(0.0, -min_rel), 1e-4));
    out.push_back(check("relative entropy additive on products", worst_add, worst_add, 1e-4));
    out.push_back(check_below("relative entropy monotone under partial trace", worst_mono, 0.0, 1e-4));

    const fock::FockArray one = fock::build_state(fock::StateSpec::fock_n(1), 60).to_density();
    const fock::FockArray th = fock::build_state(fock::StateSpec::thermal(1.0), 60, 1e-6);
    out.push_back(check_close("S(|1><1| || thermal(1))", fock::relative_entropy(one, th), 2.0, 1e-3));

    double worst_route = 0.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        fock::FockArray rho;
        if (k % 2 == 0) {
            rho = random_ket(1, 50, 4, rng).to_density();
        } else {
            const Complex a(u(rng), u(rng));
            rho = fock::build_state(fock::StateSpec::cat(a), 50).to_density();
        }
        worst_route = std::max(worst_route, std::abs(fock::delta_g(rho) - fock::delta_g_relative(rho)));
    }
    out.push_back(check("delta_G entropy difference == relative entropy route", worst_route, worst_route, 2e-3));
    return out;
}

// ---------------------------------------------------------------------------
// lemma1: Gaussification commutes with pure loss

struct LossCommutationConfig {
    int channels = 10;
    int states = 10;
    int cutoff = 30;
};

inline std::vector<Assertion> suite_loss_commutation(std::uint64_t seed, const LossCommutationConfig& cfg = {}) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<double> taus;
    for (int k = 0; k < cfg.channels; ++k) taus.push_back(u(rng));
    std::vector<fock::FockArray> states;
    for (int k = 0; k < cfg.states; ++k) states.push_back(random_ket(1, cfg.cutoff, 5, rng));
    double worst = 0.0;
    for (double tau : taus) {
        const maps::MapDescriptor loss = maps::loss(tau, cfg.cutoff);
        for (const fock::FockArray& s : states) {
            const gaussian::GaussianState lhs = fock::gaussify(fock::apply_map(s, loss.body()).state);
            const gaussian::GaussianState rhs = detail::loss_gaussian(fock::gaussify(s), tau);
            worst = std::max(worst, detail::moment_gap(lhs, rhs));
        }
    }
    return {check("gaussify(loss(rho)) == loss(gaussify(rho)) on " + std::to_string(cfg.channels) + "x" +
                      std::to_string(cfg.states) + " pairs",
                  worst, worst, 1e-4)};
}

// ---------------------------------------------------------------------------
// counterexamples: coherent-state projection

/// <a> after projecting mode A' of sigma = (|a,a><a,a| + |-a,-a><-a,-a|)/2.
inline double projected_mean(double alpha, int d) {
    const fock::FockArray plus = fock::tensor(fock::build_state(fock::StateSpec::coherent(alpha), d),
                                              fock::build_state(fock::StateSpec::coherent(alpha), d));
    const fock::FockArray minus = fock::tensor(fock::build_state(fock::StateSpec::coherent(-alpha), d),
                                               fock::build_state(fock::StateSpec::coherent(-alpha), d));
    const CMat sigma = 0.5 * (plus.to_density().density_data() + minus.to_density().density_data());
    const fock::FockArray s = fock::FockArray::density(sigma, 2, d);
    const maps::MapDescriptor t = maps::coherent_projector(alpha, d);
    return fock::moments(fock::apply_map(s, t.body(), 1).state).a(0).real();
}

/// <a> after projecting the Gaussification of sigma.
inline double projected_mean_gaussified(double alpha, int d) {
    const fock::FockArray plus = fock::tensor(fock::build_state(fock::StateSpec::coherent(alpha), d),
                                              fock::build_state(fock::StateSpec::coherent(alpha), d));
    const fock::FockArray minus = fock::tensor(fock::build_state(fock::StateSpec::coherent(-alpha), d),
                                               fock::build_state(fock::StateSpec::coherent(-alpha), d));
    const CMat sigma = 0.5 * (plus.to_density().density_data() + minus.to_density().density_data());
    const gaussian::GaussianState g = fock::gaussify(fock::FockArray::density(sigma, 2, d));
    const fock::FockArray lg = fock::gaussian_to_fock(g, d, 1e-6);
    const maps::MapDescriptor t = maps::coherent_projector(alpha, d);
    return fock::moments(fock::apply_map(lg, t.body(), 1).state).a(0).real();
}

inline double projected_mean_closed_form(double alpha) {
    const double e = std::exp(-4.0 * alpha * alpha);
    return (1.0 - e) / (1.0 + e) * alpha;
}

inline double gaussified_mean_alt(double alpha) { return 2.0 * alpha * alpha * alpha / (1.0 + alpha * alpha); }

/// Mean of the Gaussian weight exp(-x^2/(2 a^2) - (x - a)^2) over x.
inline double gaussified_projection_mean(double alpha) {
    return 2.0 * alpha * alpha * alpha / (1.0 + 2.0 * alpha * alpha);
}

struct ProjectionGain {
    double before = 0.0;  // delta_G(rho_AA')
    double after = 0.0;   // delta_G(T_alpha(rho_AA'))
    double weight_norm = 0.0;
};

/// rho = sqrt(eps)|a><a| (x) |n><n| + sqrt(1-eps)|-a><-a| (x) thermal(n_thermal), rescaled to unit trace.
/// Mode 0 is A, mode 1 is A'.
inline ProjectionGain projection_gain(double eps, double alpha, int n, double n_thermal, int d) {
    const CMat fock_n = fock::build_state(fock::StateSpec::fock_n(n), d).to_density().density_data();
    const CMat th = fock::build_state(fock::StateSpec::thermal(n_thermal), d, 1e-6).density_data();
    const CMat plus = fock::build_state(fock::StateSpec::coherent(alpha), d).to_density().density_data();
    const CMat minus = fock::build_state(fock::StateSpec::coherent(-alpha), d).to_density().density_data();
    const double w1 = std::sqrt(eps);
    const double w2 = std::sqrt(1.0 - eps);
    const CMat rho = w1 * Eigen::kroneckerProduct(fock_n, plus).eval() + w2 * Eigen::kroneckerProduct(th, minus).eval();
    ProjectionGain c;
    c.weight_norm = w1 + w2;
    const fock::FockArray r = fock::FockArray::density(rho, 2, d, 0.0, 1e-6);
    c.before = fock::delta_g(r);
    const maps::MapDescriptor t = maps::coherent_projector(alpha, d);
    c.after = fock::delta_g(fock::apply_map(r, t.body(), 1).state);
    return c;
}

inline std::vector<Assertion> suite_counterexamples() {
    std::vector<Assertion> out;
    for (double a : {0.5, 1.0}) {
        const std::string tag = "alpha=" + std::string(a == 0.5 ? "0.5" : "1");
        out.push_back(check_close("<a> of lambda_G(T(sigma)) vs (1-e^{-4a^2})/(1+e^{-4a^2}) a, " + tag,
                                  projected_mean(a, 40), projected_mean_closed_form(a), 1e-3));
        const double m = projected_mean_gaussified(a, 40);
        out.push_back(check_close("<a> of T(lambda_G(sigma)) vs 2a^3/(1+a^2), " + tag, m, gaussified_mean_alt(a), 1e-3));
        out.push_back(check_close("<a> of T(lambda_G(sigma)) vs 2a^3/(1+2a^2), " + tag, m, gaussified_projection_mean(a), 1e-3));
    }
    const ProjectionGain c = projection_gain(0.01, 2.5, 2, 1.0, 32);
    out.push_back(check("delta_G(T(rho)) - delta_G(rho) > 0.5", c.after - c.before,
                        std::max(0.0, c.before + 0.5 - c.after), 0.0));
    return out;
}

// ---------------------------------------------------------------------------
// monotone-props: optimizer soundness, d_G <= delta~_G, Gaussian unitary invariance, loss, energy ceiling

inline std::vector<Assertion> suite_monotone_props(std::uint64_t seed) {
    using namespace monotone;
    std::vector<Assertion> out;
    MonotoneConfig cfg;
    cfg.optimizer.seed = seed;
    const MonotoneResult pns = delta_tilde(maps::pns(30), cfg);
    const MonotoneResult pna = delta_tilde(maps::pna(30), cfg);
    for (const MonotoneResult* r : {&pns, &pna}) {
        double trace_max = -1e300;
        for (const auto& t : r->trace) trace_max = std::max(trace_max, t.value);
        const std::string tag = r == &pns ? "pns" : "pna";
        out.push_back(check_below("optimizer value >= trace maximum, " + tag, trace_max, r->value, 1e-12));
    }
    MonotoneConfig other = cfg;
    other.optimizer.seed = seed + 1000;
    out.push_back(check_close("seed stability, pns", delta_tilde(maps::pns(30), other).value, pns.value, 1e-3));
    out.push_back(check_close("seed stability, pna", delta_tilde(maps::pna(30), other).value, pna.value, 1e-3));

    out.push_back(check_below("d_G <= delta~_G, pns", d_g_bound(maps::pns(30), cfg).value, pns.value, 1e-3));
    out.push_back(check_below("d_G <= delta~_G, pna", d_g_bound(maps::pna(30), cfg).value, pna.value, 1e-3));

    // Random single-mode Gaussian unitaries before and after photon subtraction.
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_unitary_op = [&] {
        gaussian::SymplecticOp s = gaussian::rotation(1, 0, kPi * u(rng));
        s = gaussian::squeezing(1, 0, 0.2 * u(rng)).after(s);
        s = gaussian::rotation(1, 0, kPi * u(rng)).after(s);
        return gaussian::displacement(1, 0, Complex(0.3 * u(rng), 0.3 * u(rng))).after(s);
    };
    const gaussian::SymplecticOp pre = random_unitary_op();
    const gaussian::SymplecticOp post = random_unitary_op();
    MonotoneConfig budget = cfg;
    budget.energy = 2.0;
    const maps::MapDescriptor composed = maps::compose_gaussian(maps::pns(24), pre, post);
    const MonotoneResult wrapped = delta_tilde(composed, budget);
    out.push_back(check_close("delta~_G(U2 o pns o U1) == delta~_G(pns)", wrapped.value, pns.value, 2e-2));

    // Loss after photon subtraction.
    const maps::MapDescriptor lossy = maps::then_channel(maps::pns(24), maps::loss(0.7, 24));
    const MonotoneResult lossy_r = assisted_lower_bound(lossy, 2.0, budget);
    out.push_back(check_below("delta~_G(loss o pns) <= delta~_G(pns)", lossy_r.value, pns.value, 1e-3));

    // Energy ceiling at the optimizers' outputs.
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [map, r] : {std::pair{&composed, &wrapped}, std::pair{&lossy, &lossy_r}}) {
        FockObjective obj(*map, budget.trace_tol, budget.min_cutoff);
        const InputParams& p = *r->argmax_input;
        const fock::FockArray in = input_family_fock(p, obj.cutoff_for(p), budget.trace_tol);
        const fock::Ensemble e = fock::apply_map(fock::Ensemble::from_ket(in), map->at_cutoff(in.cutoff()).body(), 1,
                                                 budget.trace_tol).state;
        const double energy = fock::gaussify(e).mean_photons();
        worst = std::max(worst, r->value - energy_ceiling(energy, 2));
    }
    out.push_back(check_below("delta_G <= 2 g(E/2) at the wrapped and lossy optima", worst, 0.0, 1e-9));
    return out;
}

}  // namespace nongauss::cli
