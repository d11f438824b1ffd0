#pragma once

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/monotone/wick.hpp"

#include <cmath>

namespace nongauss::monotone {

/// Phase-space representation of D_alpha R_theta S_r |zeta> (exact).
inline gaussian::GaussianState input_family_gaussian(const InputParams& p) {
    p.validate();
    gaussian::GaussianState s = gaussian::tmsv_state(p.n_s);
    s = gaussian::apply_symplectic(s, gaussian::squeezing(2, 1, p.r));
    s = gaussian::apply_symplectic(s, gaussian::rotation(2, 1, p.theta));
    s = gaussian::apply_symplectic(s, gaussian::displacement(2, 1, p.alpha));
    return s;
}

/// Cutoff guess for the input family at truncation tolerance `tol`.
inline int input_family_cutoff(const InputParams& p, double tol) {
    const double nu = (2.0 * p.n_s + 1.0) * std::exp(2.0 * std::abs(p.r));
    const double t = (nu - 1.0) / (nu + 1.0);
    const double tail = t > 1e-12 ? std::log(tol) / std::log(t) : 0.0;
    const double a = std::abs(p.alpha);
    const double shift = a * a + 6.0 * a;
    return std::clamp(static_cast<int>(std::ceil(tail + shift)) + 8, 8, fock::kMaxCutoff);
}

/// Fock ket of the input family at cutoff d; the truncation deficit is the
/// TMSV tail plus the norm lost by each box-projected operator.
inline fock::FockArray input_family_fock(const InputParams& p, int d, double trace_tol = fock::kDefaultTraceTol) {
    p.validate();
    const fock::FockArray zeta = fock::build_state(fock::StateSpec::tmsv(p.n_s), d, trace_tol, trace_tol);
    CVec psi = zeta.ket_data();
    if (std::abs(p.r) > 0.0) psi = fock::apply_local(psi, 2, d, 1, fock::squeeze_matrix(p.r, d));
    if (p.theta != 0.0) psi = fock::apply_local(psi, 2, d, 1, fock::rotation_matrix(p.theta, d));
    if (std::abs(p.alpha) > 0.0) psi = fock::apply_local(psi, 2, d, 1, fock::displacement_matrix(p.alpha, d));
    return fock::FockArray::ket(std::move(psi), 2, d, zeta.trace_deficit(), trace_tol);
}

/// Builds the input family at the guessed cutoff, retrying at the suggested
/// cutoff when the guess is too small.
inline fock::FockArray input_family_fock_auto(const InputParams& p, double trace_tol, int min_cutoff = 8,
                                              int max_cutoff = fock::kMaxCutoff) {
    int d = std::clamp(input_family_cutoff(p, trace_tol), min_cutoff, max_cutoff);
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return input_family_fock(p, d, trace_tol);
        } catch (const TruncationError& e) {
            if (d >= max_cutoff) throw;
            d = std::min(max_cutoff, std::max(e.suggested_cutoff(), d + 8));
        }
    }
    return input_family_fock(p, d, trace_tol);
}

/// Maps (t_energy, t_alpha, t_ns, theta, phi) in [0,1]^3 x R^2 onto the input
/// family with input energy t_energy * budget.
inline InputParams restricted_params(double budget, double t_energy, double t_alpha, double t_ns, double theta,
                                     double phi = 0.0) {
    const double e = std::clamp(t_energy, 0.0, 1.0) * budget;
    const double ea = std::clamp(t_alpha, 0.0, 1.0) * e;
    const double rest = e - ea;
    InputParams p;
    p.alpha = std::polar(std::sqrt(ea), phi);
    p.theta = theta;
    p.n_s = std::clamp(t_ns, 0.0, 1.0) * rest;
    const double c = (2.0 * rest + 1.0) / (2.0 * p.n_s + 1.0);
    p.r = 0.5 * std::acosh(std::max(1.0, c));
    return p;
}

}  // namespace nongauss::monotone
