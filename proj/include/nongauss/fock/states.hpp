#pragma once

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/gaussian.hpp"

#include <cmath>
#include <string>

namespace nongauss::fock {

inline constexpr double kDefaultStateBound = 1e-8;

enum class StateKind { fock, coherent, thermal, tmsv, cat };

struct StateSpec {
    StateKind kind = StateKind::fock;
    Complex alpha{};   // coherent, cat
    double value = 0;  // thermal N, tmsv N_S
    int n = 0;         // fock

    static StateSpec fock_n(int n) { return {StateKind::fock, {}, 0.0, n}; }
    static StateSpec coherent(Complex a) { return {StateKind::coherent, a, 0.0, 0}; }
    static StateSpec thermal(double mean) { return {StateKind::thermal, {}, mean, 0}; }
    static StateSpec tmsv(double n_s) { return {StateKind::tmsv, {}, n_s, 0}; }
    static StateSpec cat(Complex a) { return {StateKind::cat, a, 0.0, 0}; }
};

namespace detail {

inline CVec coherent_amplitudes(Complex alpha, int d) {
    CVec c(d);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < d; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

inline double deficit_of(const StateSpec& s, int d) {
    switch (s.kind) {
        case StateKind::fock: return s.n < d ? 0.0 : 1.0;
        case StateKind::coherent: return std::max(0.0, 1.0 - coherent_amplitudes(s.alpha, d).squaredNorm());
        case StateKind::thermal: {
            const double q = s.value / (s.value + 1.0);
            return std::pow(q, d);
        }
        case StateKind::tmsv: {
            const double q = s.value / (s.value + 1.0);
            return std::pow(q, d);
        }
        case StateKind::cat: {
            CVec c = coherent_amplitudes(s.alpha, d);
            for (int n = 1; n < d; n += 2) c(n) = 0.0;
            const double exact = 0.5 * (1.0 + std::exp(-2.0 * std::norm(s.alpha)));
            return std::max(0.0, 1.0 - c.squaredNorm() / exact);
        }
    }
    return 1.0;
}

}  // namespace detail

/// Smallest cutoff (>= d) at which the state's truncation deficit is below `bound`.
inline int required_cutoff(const StateSpec& s, double bound, int d = 2) {
    for (int k = std::max(2, d); k <= kMaxCutoff; ++k)
        if (detail::deficit_of(s, k) <= bound) return k;
    return kMaxCutoff;
}

inline FockArray build_state(const StateSpec& s, int d, double bound = kDefaultStateBound,
                             double trace_tol = kDefaultTraceTol) {
    check_cutoff(d);
    switch (s.kind) {
        case StateKind::fock:
            if (s.n < 0) throw InvalidArgument("build_state: photon number must be >= 0");
            break;
        case StateKind::thermal:
        case StateKind::tmsv:
            if (!(s.value >= 0.0) || !std::isfinite(s.value))
                throw InvalidArgument("build_state: mean photon number must be finite and >= 0");
            break;
        case StateKind::coherent:
        case StateKind::cat:
            if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag()))
                throw InvalidArgument("build_state: non-finite amplitude");
            break;
    }
    const double deficit = detail::deficit_of(s, d);
    if (deficit > bound)
        throw TruncationError("build_state: truncation deficit " + std::to_string(deficit) + " at cutoff " +
                                  std::to_string(d),
                              required_cutoff(s, bound, d));
    const double tol = std::max(trace_tol, bound);
    switch (s.kind) {
        case StateKind::fock: {
            CVec psi = CVec::Zero(d);
            psi(s.n) = 1.0;
            return FockArray::ket(std::move(psi), 1, d, 0.0, tol);
        }
        case StateKind::coherent:
            return FockArray::ket(detail::coherent_amplitudes(s.alpha, d), 1, d, 0.0, tol);
        case StateKind::thermal: {
            CMat rho = CMat::Zero(d, d);
            const double q = s.value / (s.value + 1.0);
            double p = 1.0 / (s.value + 1.0);
            for (int n = 0; n < d; ++n, p *= q) rho(n, n) = p;
            return FockArray::density(std::move(rho), 1, d, 0.0, tol);
        }
        case StateKind::tmsv: {
            const double lam2 = s.value / (s.value + 1.0);
            const double lam = std::sqrt(lam2);
            CVec psi = CVec::Zero(static_cast<long>(d) * d);
            double c = std::sqrt(1.0 - lam2);
            for (int n = 0; n < d; ++n, c *= lam) psi(static_cast<long>(n) * d + n) = c;
            return FockArray::ket(std::move(psi), 2, d, 0.0, tol);
        }
        case StateKind::cat: {
            CVec c = detail::coherent_amplitudes(s.alpha, d);
            for (int n = 1; n < d; n += 2) c(n) = 0.0;
            return FockArray::ket_normalized(c / c.norm(), 1, d, deficit, tol);
        }
    }
    throw InvalidArgument("build_state: unknown kind");
}

namespace detail {

/// Cutoff holding the intermediate states of the Williamson route; the largest
/// covariance eigenvalue met along the way sets the photon tail.
inline int working_cutoff(const gaussian::GaussianState& g, const gaussian::WilliamsonForm& w, int d) {
    const gaussian::EulerDecomposition e = gaussian::euler_decompose(w.s);
    double nu = 1.0;
    for (int k = 0; k < g.n_modes(); ++k) nu = std::max(nu, w.mu[k] * std::exp(2.0 * std::abs(e.r[k])));
    Eigen::SelfAdjointEigenSolver<RMat> es(g.cov(), Eigen::EigenvaluesOnly);
    nu = std::max(nu, es.eigenvalues().maxCoeff());
    const double t = (nu - 1.0) / (nu + 1.0);
    const double tail = t > 1e-12 ? std::log(1e-10) / std::log(t) : 0.0;
    return std::clamp(static_cast<int>(std::ceil(std::max(d + 10.0, tail + 10.0))), d, kMaxCutoff);
}

}  // namespace detail

/// Density matrix of a 1- or 2-mode Gaussian state: thermal product in
/// Williamson form, the matching Gaussian unitary, then the displacement.
/// Intermediate squeezed states live at a larger working cutoff and are
/// projected onto the D-box at the end.
inline FockArray gaussian_to_fock(const gaussian::GaussianState& g, int d, double trace_tol = kDefaultTraceTol,
                                  int work_cutoff = 0) {
    const int n = g.n_modes();
    if (n > 2) throw InvalidArgument("gaussian_to_fock: only 1 or 2 modes are supported");
    check_cutoff(d);
    const gaussian::WilliamsonForm w = gaussian::williamson(g);
    const int dw = work_cutoff > 0 ? std::max(work_cutoff, d) : detail::working_cutoff(g, w, d);
    std::vector<RVec> pops;
    for (int k = 0; k < n; ++k) {
        const double nk = std::max(0.0, (w.mu[k] - 1.0) / 2.0);
        const double q = nk / (nk + 1.0);
        RVec p(dw);
        double v = 1.0 / (nk + 1.0);
        for (int m = 0; m < dw; ++m, v *= q) p(m) = v;
        pops.push_back(p);
    }
    std::vector<std::pair<long, double>> branches;
    double kept = 0.0;
    if (n == 1) {
        for (int m = 0; m < dw; ++m)
            if (pops[0](m) > 1e-15) branches.emplace_back(m, pops[0](m));
    } else {
        for (int m0 = 0; m0 < dw; ++m0)
            for (int m1 = 0; m1 < dw; ++m1) {
                const double p = pops[0](m0) * pops[1](m1);
                if (p > 1e-15) branches.emplace_back(static_cast<long>(m0) * dw + m1, p);
            }
    }
    const long dim_w = ipow(dw, n);
    CMat x = CMat::Zero(dim_w, static_cast<Eigen::Index>(branches.size()));
    for (std::size_t b = 0; b < branches.size(); ++b) {
        x(branches[b].first, static_cast<Eigen::Index>(b)) = std::sqrt(branches[b].second);
        kept += branches[b].second;
    }
    const OperatorChain chain = symplectic_unitary(gaussian::SymplecticOp::make(w.s, g.mean()), dw);
    x = chain.apply_columns(std::move(x));
    const long dim = ipow(d, n);
    CMat box(dim, x.cols());
    if (n == 1) {
        box = x.topRows(d);
    } else {
        for (int m0 = 0; m0 < d; ++m0) box.middleRows(static_cast<long>(m0) * d, d) = x.middleRows(static_cast<long>(m0) * dw, d);
    }
    CMat rho = box * box.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    return FockArray::density(std::move(rho), n, d, std::max(0.0, 1.0 - kept), trace_tol);
}

}  // namespace nongauss::fock
