#pragma once

// Phase-space engine for Gaussian states and Gaussian unitaries.
//
// Conventions: hbar = 2, quadratures ordered (q1, p1, ..., qn, pn) with
// q = a + a^dagger and p = i (a^dagger - a). The vacuum has identity
// covariance and [x_i, x_j] = 2 i Omega_ij.

#include "nongauss/errors.hpp"
#include "nongauss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nongauss::gaussian {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPhysicalTol = 1e-9;
inline constexpr double kSymplecticTol = 1e-10;

/// Block-diagonal symplectic form with 2x2 blocks [[0, 1], [-1, 0]].
inline RMat symplectic_form(int n) {
    if (n < 1) throw InvalidArgument("symplectic_form: n must be >= 1");
    RMat omega = RMat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

namespace detail {

inline bool all_finite(const RMat& m) { return m.allFinite(); }

inline double min_eigenvalue_with_omega(const RMat& cov) {
    const int n = static_cast<int>(cov.rows() / 2);
    CMat h = cov.cast<Complex>() + Complex(0.0, 1.0) * symplectic_form(n).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace detail

/// Mean vector and covariance matrix of an n-mode bosonic state.
class GaussianState {
public:
    GaussianState() = default;

    /// Validating constructor: symmetric covariance with cov + i Omega >= 0.
    static GaussianState make(RVec mean, RMat cov) {
        GaussianState s = unchecked(std::move(mean), std::move(cov));
        s.validate();
        return s;
    }

    /// Skips the physicality check; shape and finiteness are still enforced.
    static GaussianState unchecked(RVec mean, RMat cov) {
        if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0)
            throw InvalidArgument("GaussianState: covariance must be 2n x 2n with n >= 1");
        if (mean.size() != cov.rows())
            throw InvalidArgument("GaussianState: mean length must match covariance");
        if (!mean.allFinite() || !cov.allFinite())
            throw InvalidArgument("GaussianState: non-finite entries");
        GaussianState s;
        s.mean_ = std::move(mean);
        s.cov_ = std::move(cov);
        return s;
    }

    static GaussianState vacuum(int n) {
        if (n < 1) throw InvalidArgument("vacuum: n must be >= 1");
        return unchecked(RVec::Zero(2 * n), RMat::Identity(2 * n, 2 * n));
    }

    static GaussianState thermal(double mean_photons) {
        if (!(mean_photons >= 0.0)) throw InvalidArgument("thermal: mean photon number must be >= 0");
        return unchecked(RVec::Zero(2), (2.0 * mean_photons + 1.0) * RMat::Identity(2, 2));
    }

    static GaussianState coherent(Complex alpha) {
        RVec mean(2);
        mean << 2.0 * alpha.real(), 2.0 * alpha.imag();
        return unchecked(std::move(mean), RMat::Identity(2, 2));
    }

    int n_modes() const { return static_cast<int>(mean_.size() / 2); }
    const RVec& mean() const { return mean_; }
    const RMat& cov() const { return cov_; }

    /// Mean photon number summed over all modes.
    double mean_photons() const {
        return 0.25 * (cov_.trace() + mean_.squaredNorm()) - 0.5 * n_modes();
    }

    void validate() const {
        const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
            throw InvalidState("GaussianState: covariance is not symmetric");
        if (detail::min_eigenvalue_with_omega(cov_) < -kPhysicalTol * scale)
            throw InvalidState("GaussianState: cov + i*Omega is not positive semidefinite");
    }

private:
    RVec mean_;
    RMat cov_;
};

/// Product state a (x) b; modes of a come first.
inline GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    RVec mean(na + nb);
    mean << a.mean(), b.mean();
    RMat cov = RMat::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return GaussianState::unchecked(std::move(mean), std::move(cov));
}

/// Affine phase-space action x -> S x + delta_x of a Gaussian unitary.
class SymplecticOp {
public:
    SymplecticOp() = default;

    static SymplecticOp make(RMat s, RVec delta_x) {
        if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0)
            throw InvalidArgument("SymplecticOp: matrix must be 2n x 2n");
        if (delta_x.size() != s.rows()) throw InvalidArgument("SymplecticOp: displacement length mismatch");
        const int n = static_cast<int>(s.rows() / 2);
        const RMat omega = symplectic_form(n);
        const double scale = std::max(1.0, s.cwiseAbs().maxCoeff() * s.cwiseAbs().maxCoeff());
        if ((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() > kSymplecticTol * scale)
            throw InvalidArgument("SymplecticOp: matrix is not symplectic");
        SymplecticOp op;
        op.s_ = std::move(s);
        op.delta_x_ = std::move(delta_x);
        return op;
    }

    static SymplecticOp identity(int n) {
        return make(RMat::Identity(2 * n, 2 * n), RVec::Zero(2 * n));
    }

    int n_modes() const { return static_cast<int>(s_.rows() / 2); }
    const RMat& matrix() const { return s_; }
    const RVec& delta_x() const { return delta_x_; }

    /// The op that applies `first`, then `*this`.
    SymplecticOp after(const SymplecticOp& first) const {
        if (first.n_modes() != n_modes()) throw InvalidArgument("SymplecticOp::after: mode count mismatch");
        return make(s_ * first.s_, s_ * first.delta_x_ + delta_x_);
    }

    SymplecticOp inverse() const {
        const RMat omega = symplectic_form(n_modes());
        const RMat inv = -omega * s_.transpose() * omega;
        return make(inv, -inv * delta_x_);
    }

private:
    RMat s_;
    RVec delta_x_;
};

struct WilliamsonSpectrum {
    std::vector<double> mu;  // sorted descending
};

/// Symplectic eigenvalues: the moduli of the eigenvalues of i Omega Lambda.
inline WilliamsonSpectrum symplectic_eigenvalues(const GaussianState& state) {
    const RMat& cov = state.cov();
    if (!cov.allFinite()) throw InvalidArgument("symplectic_eigenvalues: non-finite covariance");
    const int n = state.n_modes();
    CMat m = Complex(0.0, 1.0) * (symplectic_form(n) * cov).cast<Complex>();
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    std::vector<double> values;
    values.reserve(2 * n);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex ev = es.eigenvalues()(k);
        if (std::abs(ev.imag()) > 1e-8 * scale)
            throw InvalidState("symplectic_eigenvalues: i*Omega*Lambda has complex spectrum");
        values.push_back(std::abs(ev.real()));
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    WilliamsonSpectrum spec;
    for (int k = 0; k < n; ++k) spec.mu.push_back(0.5 * (values[2 * k] + values[2 * k + 1]));
    return spec;
}

/// Entropy in bits of a thermal state with the given mean photon number.
inline double thermal_entropy(double n) {
    if (!(n >= 0.0)) throw InvalidArgument("thermal_entropy: mean photon number must be >= 0");
    if (n == 0.0) return 0.0;
    return (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
}

/// Von Neumann entropy (bits) of the Gaussian state with this covariance.
/// Symplectic eigenvalues within `tol` below 1 are clamped to 1.
inline double gaussian_entropy(const GaussianState& state, double tol = kPhysicalTol) {
    double s = 0.0;
    for (double mu : symplectic_eigenvalues(state).mu) {
        if (mu < 1.0 - tol) throw InvalidState("gaussian_entropy: symplectic eigenvalue below 1");
        s += thermal_entropy(std::max(0.0, (mu - 1.0) / 2.0));
    }
    return s;
}

enum class UnitaryKind { displacement, rotation, squeeze, two_mode_squeeze, beamsplitter };

/// Parameters of a primitive Gaussian unitary. `alpha` is read by
/// displacement only; `value` carries theta, r or the transmissivity.
struct UnitarySpec {
    UnitaryKind kind = UnitaryKind::rotation;
    Complex alpha{};
    double value = 0.0;
};

namespace detail {

inline void check_target(int n, int t) {
    if (t < 0 || t >= n) throw InvalidArgument("gaussian_unitary: target mode out of range");
}

inline SymplecticOp embed_single(int n, int t, const Eigen::Matrix2d& block, const Eigen::Vector2d& shift) {
    check_target(n, t);
    RMat s = RMat::Identity(2 * n, 2 * n);
    s.block<2, 2>(2 * t, 2 * t) = block;
    RVec d = RVec::Zero(2 * n);
    d.segment<2>(2 * t) = shift;
    return SymplecticOp::make(std::move(s), std::move(d));
}

inline SymplecticOp embed_pair(int n, int t1, int t2, const Eigen::Matrix4d& block) {
    check_target(n, t1);
    check_target(n, t2);
    if (t1 == t2) throw InvalidArgument("gaussian_unitary: two-mode targets must differ");
    RMat s = RMat::Identity(2 * n, 2 * n);
    const int idx[4] = {2 * t1, 2 * t1 + 1, 2 * t2, 2 * t2 + 1};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s(idx[i], idx[j]) = block(i, j);
    return SymplecticOp::make(std::move(s), RVec::Zero(2 * n));
}

}  // namespace detail

/// D_alpha = exp(alpha a^dag - alpha^* a): shifts the mean by (2 Re alpha, 2 Im alpha).
inline SymplecticOp displacement(int n, int target, Complex alpha) {
    return detail::embed_single(n, target, Eigen::Matrix2d::Identity(),
                                Eigen::Vector2d(2.0 * alpha.real(), 2.0 * alpha.imag()));
}

/// R_theta = exp(-i theta a^dag a); Heisenberg a -> a e^{-i theta}.
inline SymplecticOp rotation(int n, int target, double theta) {
    Eigen::Matrix2d b;
    b << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return detail::embed_single(n, target, b, Eigen::Vector2d::Zero());
}

/// S_r = exp[r (a^2 - a^dag^2) / 2]; vacuum -> cov diag(e^{-2r}, e^{2r}).
inline SymplecticOp squeezing(int n, int target, double r) {
    Eigen::Matrix2d b;
    b << std::exp(-r), 0.0, 0.0, std::exp(r);
    return detail::embed_single(n, target, b, Eigen::Vector2d::Zero());
}

/// S_{2,r} = exp[-r (a b - a^dag b^dag)]; two vacua -> TMSV with lambda = tanh r.
inline SymplecticOp two_mode_squeezing(int n, int t1, int t2, double r) {
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    Eigen::Matrix4d b;
    b << c, 0, s, 0,
         0, c, 0, -s,
         s, 0, c, 0,
         0, -s, 0, c;
    return detail::embed_pair(n, t1, t2, b);
}

/// Heisenberg a1 -> sqrt(tau) a1 + sqrt(1-tau) a2, a2 -> -sqrt(1-tau) a1 + sqrt(tau) a2.
inline SymplecticOp beamsplitter(int n, int t1, int t2, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("beamsplitter: transmissivity must lie in [0, 1]");
    const double c = std::sqrt(tau);
    const double s = std::sqrt(1.0 - tau);
    Eigen::Matrix4d b;
    b << c, 0, s, 0,
         0, c, 0, s,
         -s, 0, c, 0,
         0, -s, 0, c;
    return detail::embed_pair(n, t1, t2, b);
}

inline SymplecticOp gaussian_unitary(const UnitarySpec& spec, int n_modes, std::span<const int> targets) {
    if (n_modes < 1) throw InvalidArgument("gaussian_unitary: n_modes must be >= 1");
    const bool two_mode = spec.kind == UnitaryKind::two_mode_squeeze || spec.kind == UnitaryKind::beamsplitter;
    if (targets.size() != (two_mode ? 2u : 1u)) throw InvalidArgument("gaussian_unitary: wrong number of targets");
    if (!std::isfinite(spec.value) || !std::isfinite(spec.alpha.real()) || !std::isfinite(spec.alpha.imag()))
        throw InvalidArgument("gaussian_unitary: non-finite parameter");
    switch (spec.kind) {
        case UnitaryKind::displacement: return displacement(n_modes, targets[0], spec.alpha);
        case UnitaryKind::rotation: return rotation(n_modes, targets[0], spec.value);
        case UnitaryKind::squeeze: return squeezing(n_modes, targets[0], spec.value);
        case UnitaryKind::two_mode_squeeze: return two_mode_squeezing(n_modes, targets[0], targets[1], spec.value);
        case UnitaryKind::beamsplitter: return beamsplitter(n_modes, targets[0], targets[1], spec.value);
    }
    throw InvalidArgument("gaussian_unitary: unknown kind");
}

/// x -> S x + dx, Lambda -> S Lambda S^T. Valid for non-Gaussian inputs too.
inline GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op) {
    if (state.n_modes() != op.n_modes()) throw InvalidArgument("apply_symplectic: dimension mismatch");
    const RMat& s = op.matrix();
    RMat cov = s * state.cov() * s.transpose();
    cov = 0.5 * (cov + cov.transpose());
    return GaussianState::unchecked(s * state.mean() + op.delta_x(), std::move(cov));
}

/// Reduced state on the listed modes (in the listed order).
inline GaussianState partial_trace_gaussian(const GaussianState& state, std::span<const int> keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace_gaussian: keep set is empty");
    const int n = state.n_modes();
    std::vector<int> idx;
    for (int m : keep) {
        if (m < 0 || m >= n) throw InvalidArgument("partial_trace_gaussian: mode out of range");
        if (std::find(idx.begin(), idx.end(), 2 * m) != idx.end())
            throw InvalidArgument("partial_trace_gaussian: duplicate mode");
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    const auto k = static_cast<Eigen::Index>(idx.size());
    RVec mean(k);
    RMat cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        mean(i) = state.mean()(idx[i]);
        for (Eigen::Index j = 0; j < k; ++j) cov(i, j) = state.cov()(idx[i], idx[j]);
    }
    return GaussianState::unchecked(std::move(mean), std::move(cov));
}

/// Two-mode squeezed vacuum with N_S photons per mode.
inline GaussianState tmsv_state(double n_s) {
    if (!(n_s >= 0.0)) throw InvalidArgument("tmsv_state: N_S must be >= 0");
    const double d = 2.0 * n_s + 1.0;
    const double c = 2.0 * std::sqrt(n_s * (n_s + 1.0));
    RMat cov(4, 4);
    cov << d, 0, c, 0,
           0, d, 0, -c,
           c, 0, d, 0,
           0, -c, 0, d;
    return GaussianState::unchecked(RVec::Zero(4), std::move(cov));
}

/// Lambda = S diag(mu_1, mu_1, ..., mu_n, mu_n) S^T with S symplectic.
struct WilliamsonForm {
    RMat s;
    std::vector<double> mu;
};

inline WilliamsonForm williamson(const GaussianState& state) {
    const int n = state.n_modes();
    Eigen::SelfAdjointEigenSolver<RMat> es(state.cov());
    if (es.eigenvalues().minCoeff() <= 0.0) throw InvalidState("williamson: covariance is not positive definite");
    const RMat root = es.operatorSqrt();
    const RMat inv_root = es.operatorInverseSqrt();
    RMat a = inv_root * symplectic_form(n) * inv_root;
    a = 0.5 * (a - a.transpose());
    Eigen::RealSchur<RMat> schur(a);
    RMat k = schur.matrixU();
    const RMat& t = schur.matrixT();
    WilliamsonForm out;
    out.s = RMat::Zero(2 * n, 2 * n);
    for (int b = 0; b < n; ++b) {
        double upper = t(2 * b, 2 * b + 1);
        if (upper < 0.0) {
            k.col(2 * b).swap(k.col(2 * b + 1));
            upper = t(2 * b + 1, 2 * b);
        }
        out.mu.push_back(1.0 / upper);
    }
    RVec scale(2 * n);
    for (int b = 0; b < n; ++b) scale(2 * b) = scale(2 * b + 1) = 1.0 / std::sqrt(out.mu[b]);
    out.s = root * k * scale.asDiagonal();
    return out;
}

/// TMSV parameters lambda_k of the phase-space Schmidt decomposition of a
/// pure state across `side_a` | rest, padded with zeros to the larger side.
inline std::vector<double> schmidt_decompose(const GaussianState& state, std::span<const int> side_a) {
    const int n = state.n_modes();
    for (double mu : symplectic_eigenvalues(state).mu)
        if (std::abs(mu - 1.0) > 1e-6) throw InvalidState("schmidt_decompose: state is not pure");
    std::vector<int> a(side_a.begin(), side_a.end());
    std::vector<int> b;
    for (int m = 0; m < n; ++m)
        if (std::find(a.begin(), a.end(), m) == a.end()) b.push_back(m);
    if (a.empty() || b.empty()) throw InvalidArgument("schmidt_decompose: both sides must be nonempty");
    const auto& smaller = a.size() <= b.size() ? a : b;
    std::vector<double> lambdas;
    for (double mu : symplectic_eigenvalues(partial_trace_gaussian(state, smaller)).mu) {
        const double nk = std::max(0.0, (mu - 1.0) / 2.0);
        lambdas.push_back(std::sqrt(nk / (nk + 1.0)));
    }
    lambdas.resize(std::max(a.size(), b.size()), 0.0);
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return lambdas;
}

/// Pure 2n-mode state whose first n modes reproduce `state`.
inline GaussianState purify(const GaussianState& state) {
    const int n = state.n_modes();
    const WilliamsonForm w = williamson(state);
    RMat cov = RMat::Zero(4 * n, 4 * n);
    for (int k = 0; k < n; ++k) {
        const double mu = std::max(1.0, w.mu[k]);
        const double c = std::sqrt(mu * mu - 1.0);
        const int s = 2 * k;
        const int e = 2 * n + 2 * k;
        cov(s, s) = cov(s + 1, s + 1) = cov(e, e) = cov(e + 1, e + 1) = mu;
        cov(s, e) = cov(e, s) = c;
        cov(s + 1, e + 1) = cov(e + 1, s + 1) = -c;
    }
    RMat big = RMat::Identity(4 * n, 4 * n);
    big.topLeftCorner(2 * n, 2 * n) = w.s;
    cov = big * cov * big.transpose();
    cov = 0.5 * (cov + cov.transpose());
    RVec mean = RVec::Zero(4 * n);
    mean.head(2 * n) = state.mean();
    return GaussianState::unchecked(std::move(mean), std::move(cov));
}

/// Complex n x n matrix u of a passive (orthogonal symplectic) transform,
/// in the Heisenberg convention a -> u a.
inline CMat passive_to_unitary(const RMat& o) {
    const int n = static_cast<int>(o.rows() / 2);
    CMat u(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) u(j, k) = Complex(o(2 * j, 2 * k), o(2 * j + 1, 2 * k));
    return u;
}

inline RMat unitary_to_passive(const CMat& u) {
    const auto n = u.rows();
    RMat o(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
            o(2 * j, 2 * k) = u(j, k).real();
            o(2 * j, 2 * k + 1) = -u(j, k).imag();
            o(2 * j + 1, 2 * k) = u(j, k).imag();
            o(2 * j + 1, 2 * k + 1) = u(j, k).real();
        }
    return o;
}

/// S = O_left * Z(r) * O_right with passive O's and single-mode squeezers
/// Z(r) = (+) diag(e^{-r_k}, e^{r_k}).
struct EulerDecomposition {
    CMat u_left;
    std::vector<double> r;
    CMat u_right;
};

inline EulerDecomposition euler_decompose(const RMat& s) {
    const int n = static_cast<int>(s.rows() / 2);
    const RMat omega = symplectic_form(n);
    Eigen::SelfAdjointEigenSolver<RMat> es(s.transpose() * s);
    const RMat p = es.operatorSqrt();
    const RMat o = s * p.inverse();

    Eigen::SelfAdjointEigenSolver<RMat> ep(p);
    RMat w(2 * n, 2 * n);
    std::vector<double> sigma;
    int filled = 0;
    for (int idx = 2 * n - 1; idx >= 0 && filled < 2 * n; --idx) {
        RVec v = ep.eigenvectors().col(idx);
        for (int c = 0; c < filled; ++c) v -= w.col(c).dot(v) * w.col(c);
        if (v.norm() < 0.5) continue;
        v.normalize();
        RVec pv = omega.transpose() * v;
        for (int c = 0; c < filled; ++c) pv -= w.col(c).dot(pv) * w.col(c);
        pv.normalize();
        w.col(filled) = v;
        w.col(filled + 1) = pv;
        sigma.push_back(v.dot(p * v));
        filled += 2;
    }
    if (filled != 2 * n) throw InvalidState("euler_decompose: failed to build symplectic eigenbasis");
    EulerDecomposition out;
    out.u_left = passive_to_unitary(o * w);
    out.u_right = passive_to_unitary(w.transpose());
    for (double sg : sigma) out.r.push_back(-std::log(sg));
    return out;
}

}  // namespace nongauss::gaussian
