#pragma once

// First and second moments of truncated states, the covariance assembly from
// ladder-operator moments, Gaussification, and the non-Gaussianity delta_G.

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"
#include "nongauss/fock/entropy.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"

#include <cmath>
#include <limits>

namespace nongauss::fock {

/// Ladder moments. Pair entries (j < k) live in `aa(j, k)` = <a_j a_k> and
/// `adag_a(j, k)` = <a_j^dag a_k>; unset entries are NaN.
struct MomentRecord {
    int n_modes = 0;
    CVec a;
    CVec a2;
    CVec n;
    CMat aa;
    CMat adag_a;

    static MomentRecord empty(int modes) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        MomentRecord m;
        m.n_modes = modes;
        m.a = CVec::Constant(modes, Complex(nan, nan));
        m.a2 = m.a;
        m.n = m.a;
        m.aa = CMat::Constant(modes, modes, Complex(nan, nan));
        m.adag_a = m.aa;
        return m;
    }

    MomentRecord& operator+=(const MomentRecord& o) {
        a += o.a;
        a2 += o.a2;
        n += o.n;
        aa += o.aa;
        adag_a += o.adag_a;
        return *this;
    }

    MomentRecord scaled(double w) const {
        MomentRecord m = *this;
        m.a *= w;
        m.a2 *= w;
        m.n *= w;
        m.aa *= w;
        m.adag_a *= w;
        return m;
    }
};

namespace detail {

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Sum over columns phi of <phi|X|phi> for each listed moment.
inline MomentRecord ket_moments(const CMat& kets, int n_modes, int d) {
    const CMat a = ladder(d);
    MomentRecord m = MomentRecord::empty(n_modes);
    std::vector<CMat> la(n_modes);
    for (int j = 0; j < n_modes; ++j) la[j] = apply_local(kets, n_modes, d, j, a);
    auto inner = [](const CMat& x, const CMat& y) {
        Complex s = 0.0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) s += x.col(c).dot(y.col(c));
        return s;
    };
    for (int j = 0; j < n_modes; ++j) {
        m.a(j) = inner(kets, la[j]);
        m.a2(j) = inner(kets, apply_local(la[j], n_modes, d, j, a));
        m.n(j) = inner(la[j], la[j]);
        for (int k = j + 1; k < n_modes; ++k) {
            m.aa(j, k) = inner(kets, apply_local(la[k], n_modes, d, j, a));
            m.adag_a(j, k) = inner(la[j], la[k]);
        }
    }
    return m;
}

inline MomentRecord density_moments(const CMat& rho, int n_modes, int d) {
    const CMat a = ladder(d);
    const CMat ad = a.adjoint();
    MomentRecord m = MomentRecord::empty(n_modes);
    std::vector<CMat> la(n_modes);
    for (int j = 0; j < n_modes; ++j) la[j] = apply_local(rho, n_modes, d, j, a);
    auto tr = [&](const CMat& x, int mode, const CMat& op) {
        return apply_local(x, n_modes, d, mode, op).trace();
    };
    for (int j = 0; j < n_modes; ++j) {
        m.a(j) = la[j].trace();
        m.a2(j) = tr(la[j], j, a);
        m.n(j) = tr(la[j], j, ad);
        for (int k = j + 1; k < n_modes; ++k) {
            m.aa(j, k) = tr(la[k], j, a);
            m.adag_a(j, k) = tr(la[k], j, ad);
        }
    }
    return m;
}

}  // namespace detail

inline MomentRecord moments(const FockArray& f) {
    if (f.is_ket()) {
        CMat k = f.ket_data();
        return detail::ket_moments(k, f.n_modes(), f.cutoff());
    }
    return detail::density_moments(f.density_data(), f.n_modes(), f.cutoff());
}

inline MomentRecord moments(const Ensemble& e) {
    if (e.branches.empty()) throw InvalidArgument("moments: empty ensemble");
    CMat k(e.branches.front().size(), static_cast<Eigen::Index>(e.branches.size()));
    for (std::size_t i = 0; i < e.branches.size(); ++i) k.col(static_cast<Eigen::Index>(i)) = e.branches[i];
    return detail::ket_moments(k, e.n_modes, e.cutoff);
}

/// Mean and covariance from ladder moments (hbar = 2).
inline gaussian::GaussianState covariance_from_moments(const MomentRecord& m) {
    const int n = m.n_modes;
    if (n < 1 || m.a.size() != n || m.a2.size() != n || m.n.size() != n)
        throw InvalidArgument("covariance_from_moments: incomplete record");
    for (int j = 0; j < n; ++j) {
        if (!detail::finite(m.a(j)) || !detail::finite(m.a2(j)) || !detail::finite(m.n(j)))
            throw InvalidArgument("covariance_from_moments: missing single-mode entry");
        if (m.n(j).real() < -1e-9) throw InvalidArgument("covariance_from_moments: negative photon number");
        for (int k = j + 1; k < n; ++k)
            if (!detail::finite(m.aa(j, k)) || !detail::finite(m.adag_a(j, k)))
                throw InvalidArgument("covariance_from_moments: missing pair entry");
    }
    RVec mean(2 * n);
    RMat cov(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        const double re = m.a(j).real();
        const double im = m.a(j).imag();
        const Complex s = m.a2(j);
        const double nn = m.n(j).real();
        mean(2 * j) = 2.0 * re;
        mean(2 * j + 1) = 2.0 * im;
        cov(2 * j, 2 * j) = 2.0 * s.real() + 2.0 * nn + 1.0 - 4.0 * re * re;
        cov(2 * j + 1, 2 * j + 1) = -2.0 * s.real() + 2.0 * nn + 1.0 - 4.0 * im * im;
        cov(2 * j, 2 * j + 1) = cov(2 * j + 1, 2 * j) = 2.0 * s.imag() - 4.0 * re * im;
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const Complex d = m.aa(j, k);
            const Complex c = m.adag_a(j, k);
            const double rj = m.a(j).real(), ij = m.a(j).imag();
            const double rk = m.a(k).real(), ik = m.a(k).imag();
            const double qq = 2.0 * d.real() + 2.0 * c.real() - 4.0 * rj * rk;
            const double pp = -2.0 * d.real() + 2.0 * c.real() - 4.0 * ij * ik;
            const double qp = 2.0 * d.imag() + 2.0 * c.imag() - 4.0 * rj * ik;
            const double pq = 2.0 * d.imag() - 2.0 * c.imag() - 4.0 * ij * rk;
            cov(2 * j, 2 * k) = cov(2 * k, 2 * j) = qq;
            cov(2 * j + 1, 2 * k + 1) = cov(2 * k + 1, 2 * j + 1) = pp;
            cov(2 * j, 2 * k + 1) = cov(2 * k + 1, 2 * j) = qp;
            cov(2 * j + 1, 2 * k) = cov(2 * k, 2 * j + 1) = pq;
        }
    return gaussian::GaussianState::unchecked(std::move(mean), std::move(cov));
}

/// lambda_G: the Gaussian state with the same first and second moments.
inline gaussian::GaussianState gaussify(const FockArray& f) {
    if (f.n_modes() > 2) throw InvalidArgument("gaussify: only 1 or 2 modes are supported");
    return covariance_from_moments(moments(f));
}

inline gaussian::GaussianState gaussify(const Ensemble& e) {
    if (e.n_modes > 2) throw InvalidArgument("gaussify: only 1 or 2 modes are supported");
    return covariance_from_moments(moments(e));
}

/// Symplectic eigenvalues this far below 1 are attributed to truncation noise.
inline constexpr double kMomentClampTol = 1e-6;

struct DeltaG {
    double value = 0.0;
    double gaussian_entropy = 0.0;
    double state_entropy = 0.0;
    double trace_deficit = 0.0;
};

inline DeltaG delta_g_report(const gaussian::GaussianState& g, double state_entropy, double deficit) {
    DeltaG r;
    r.gaussian_entropy = gaussian::gaussian_entropy(g, kMomentClampTol);
    r.state_entropy = state_entropy;
    r.trace_deficit = deficit;
    const double diff = r.gaussian_entropy - r.state_entropy;
    if (diff < -1e-6) throw InvalidState("delta_g: negative value " + std::to_string(diff));
    r.value = std::max(0.0, diff);
    return r;
}

inline DeltaG delta_g_report(const FockArray& f) {
    return delta_g_report(gaussify(f), von_neumann_entropy(f), f.trace_deficit());
}

inline DeltaG delta_g_report(const Ensemble& e) {
    return delta_g_report(gaussify(e), von_neumann_entropy(e), e.trace_deficit);
}

/// delta_G = S(lambda_G(rho)) - S(rho).
inline double delta_g(const FockArray& f) { return delta_g_report(f).value; }
inline double delta_g(const Ensemble& e) { return delta_g_report(e).value; }

/// Same quantity as S(rho || lambda_G(rho)). With lambda_G(rho) = U tau U^dagger
/// and tau a thermal product, Tr rho log lambda_G(rho) = sum_n (U^dagger rho U)_nn log p_n,
/// which avoids the logarithm of the tiny eigenvalues of a nearly pure tau.
inline double delta_g_relative(const FockArray& f) {
    const int n = f.n_modes();
    const int d = f.cutoff();
    const gaussian::GaussianState g = gaussify(f);
    const gaussian::WilliamsonForm w = gaussian::williamson(g);
    const int dw = detail::working_cutoff(g, w, d);

    CMat cols;
    if (f.is_ket()) {
        cols = f.ket_data();
    } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(f.density_data());
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
            if (es.eigenvalues()(k) > kEigenClamp) keep.push_back(k);
        cols.resize(f.dim(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j)
            cols.col(static_cast<Eigen::Index>(j)) = std::sqrt(es.eigenvalues()(keep[j])) * es.eigenvectors().col(keep[j]);
    }
    CMat x = CMat::Zero(ipow(dw, n), cols.cols());
    if (n == 1) {
        x.topRows(d) = cols;
    } else {
        for (int m0 = 0; m0 < d; ++m0)
            x.middleRows(static_cast<long>(m0) * dw, d) = cols.middleRows(static_cast<long>(m0) * d, d);
    }
    x = symplectic_unitary(gaussian::SymplecticOp::make(w.s, g.mean()).inverse(), dw).apply_columns(std::move(x));

    std::vector<double> log_q(n), log_p0(n);
    for (int k = 0; k < n; ++k) {
        const double nk = std::max(1e-12, (w.mu[k] - 1.0) / 2.0);
        log_q[k] = std::log2(nk / (nk + 1.0));
        log_p0[k] = -std::log2(nk + 1.0);
    }
    double cross = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double pop = x.row(i).squaredNorm();
        if (pop == 0.0) continue;
        long rest = i;
        double lp = 0.0;
        for (int k = n - 1; k >= 0; --k) {
            lp += log_p0[k] + static_cast<double>(rest % dw) * log_q[k];
            rest /= dw;
        }
        cross += pop * lp;
    }
    return std::max(0.0, -von_neumann_entropy(f) - cross);
}

}  // namespace nongauss::fock
