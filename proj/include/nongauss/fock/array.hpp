#pragma once

// Truncated Fock-space containers. Mode 0 is the most significant index:
// |i0, i1, ..., i_{n-1}> sits at i0 * D^{n-1} + ... + i_{n-1}.

#include "nongauss/errors.hpp"
#include "nongauss/linalg.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace nongauss::fock {

using SparseOp = Eigen::SparseMatrix<Complex>;

inline constexpr double kDefaultTraceTol = 1e-6;
inline constexpr int kMaxCutoff = 400;

enum class FockKind { ket, density };

inline long ipow(int base, int exp) {
    long r = 1;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

/// Cutoff that would push a geometric tail with the observed deficit below `tol`.
inline int suggest_cutoff(int cutoff, double deficit, double tol) {
    if (!(deficit > 0.0) || deficit >= 1.0) return std::min(kMaxCutoff, 2 * cutoff);
    const double factor = std::log(tol) / std::log(deficit);
    const int d = static_cast<int>(std::ceil(cutoff * std::max(1.0, factor))) + 2;
    return std::clamp(d, cutoff + 2, kMaxCutoff);
}

/// Normalized ket or density matrix over n modes of dimension D each.
class FockArray {
public:
    FockArray() = default;

    static FockArray ket(CVec psi, int n_modes, int cutoff, double prior_deficit = 0.0,
                         double trace_tol = kDefaultTraceTol) {
        check_shape(psi.size(), n_modes, cutoff);
        const double norm2 = psi.squaredNorm();
        if (!std::isfinite(norm2) || norm2 <= 0.0) throw InvalidState("FockArray::ket: zero or non-finite vector");
        FockArray f;
        f.n_modes_ = n_modes;
        f.cutoff_ = cutoff;
        f.kind_ = FockKind::ket;
        f.ket_ = psi / std::sqrt(norm2);
        f.trace_tol_ = trace_tol;
        f.trace_deficit_ = prior_deficit + std::max(0.0, 1.0 - norm2);
        f.enforce_tol();
        return f;
    }

    /// Unit-norm ket whose deficit is already known (no renormalization bookkeeping).
    static FockArray ket_normalized(CVec psi, int n_modes, int cutoff, double deficit,
                                    double trace_tol = kDefaultTraceTol) {
        FockArray f = ket(std::move(psi), n_modes, cutoff, 0.0, 1.0);
        f.trace_tol_ = trace_tol;
        f.trace_deficit_ = deficit;
        f.enforce_tol();
        return f;
    }

    static FockArray density(CMat rho, int n_modes, int cutoff, double prior_deficit = 0.0,
                             double trace_tol = kDefaultTraceTol) {
        if (rho.rows() != rho.cols()) throw InvalidArgument("FockArray::density: matrix must be square");
        check_shape(rho.rows(), n_modes, cutoff);
        const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw InvalidState("FockArray::density: matrix is not Hermitian");
        const double tr = rho.trace().real();
        if (!std::isfinite(tr) || tr <= 0.0) throw InvalidState("FockArray::density: nonpositive trace");
        FockArray f;
        f.n_modes_ = n_modes;
        f.cutoff_ = cutoff;
        f.kind_ = FockKind::density;
        f.rho_ = 0.5 * (rho + rho.adjoint()) / tr;
        f.trace_tol_ = trace_tol;
        f.trace_deficit_ = prior_deficit + std::max(0.0, 1.0 - tr);
        f.enforce_tol();
        return f;
    }

    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }
    long dim() const { return ipow(cutoff_, n_modes_); }
    FockKind kind() const { return kind_; }
    bool is_ket() const { return kind_ == FockKind::ket; }
    const CVec& ket_data() const {
        if (kind_ != FockKind::ket) throw InvalidArgument("FockArray: not a ket");
        return ket_;
    }
    const CMat& density_data() const {
        if (kind_ != FockKind::density) throw InvalidArgument("FockArray: not a density matrix");
        return rho_;
    }
    double trace_deficit() const { return trace_deficit_; }
    double trace_tol() const { return trace_tol_; }

    FockArray to_density() const {
        if (kind_ == FockKind::density) return *this;
        FockArray f = *this;
        f.kind_ = FockKind::density;
        f.rho_ = ket_ * ket_.adjoint();
        f.ket_.resize(0);
        return f;
    }

    /// Checks eigenvalues >= -1e-9 for densities (expensive; not run on construction).
    void validate_positive() const {
        if (kind_ == FockKind::ket) return;
        Eigen::SelfAdjointEigenSolver<CMat> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9) throw InvalidState("FockArray: negative eigenvalue");
    }

private:
    static void check_shape(Eigen::Index size, int n_modes, int cutoff) {
        if (n_modes < 1) throw InvalidArgument("FockArray: n_modes must be >= 1");
        if (cutoff < 2) throw InvalidArgument("FockArray: cutoff must be >= 2");
        if (size != ipow(cutoff, n_modes)) throw InvalidArgument("FockArray: data size does not match D^n");
    }

    void enforce_tol() const {
        if (trace_deficit_ > trace_tol_)
            throw TruncationError("Fock truncation deficit " + std::to_string(trace_deficit_) + " exceeds bound " +
                                      std::to_string(trace_tol_) + " at cutoff " + std::to_string(cutoff_),
                                  suggest_cutoff(cutoff_, trace_deficit_, trace_tol_));
    }

    int n_modes_ = 0;
    int cutoff_ = 0;
    FockKind kind_ = FockKind::ket;
    CVec ket_;
    CMat rho_;
    double trace_deficit_ = 0.0;
    double trace_tol_ = kDefaultTraceTol;
};

/// rho = sum_k phi_k phi_k^dagger with trace one; keeps mixed states of
/// large Hilbert spaces at the cost of the number of branches.
struct Ensemble {
    int n_modes = 0;
    int cutoff = 0;
    std::vector<CVec> branches;
    double trace_deficit = 0.0;

    static Ensemble from_ket(const FockArray& f) {
        return Ensemble{f.n_modes(), f.cutoff(), {f.ket_data()}, f.trace_deficit()};
    }

    double trace() const {
        double t = 0.0;
        for (const auto& b : branches) t += b.squaredNorm();
        return t;
    }

    void normalize() {
        const double t = trace();
        if (!(t > 0.0)) throw ZeroProbabilityBranch("Ensemble: zero trace");
        for (auto& b : branches) b /= std::sqrt(t);
    }

    CMat density() const {
        const long n = ipow(cutoff, n_modes);
        CMat rho = CMat::Zero(n, n);
        for (const auto& b : branches) rho.noalias() += b * b.adjoint();
        return rho;
    }

    FockArray to_fock(double trace_tol = kDefaultTraceTol) const {
        return FockArray::density(density(), n_modes, cutoff, trace_deficit, trace_tol);
    }
};

/// Applies a (D_out x D) matrix to `mode` of every column of `x`, where each
/// column is a ket over n modes of dimension D. D_out == 1 removes the mode.
inline CMat apply_local(const CMat& x, int n_modes, int cutoff, int mode, const CMat& op) {
    if (mode < 0 || mode >= n_modes) throw InvalidArgument("apply_local: mode out of range");
    if (op.cols() != cutoff) throw InvalidArgument("apply_local: operator dimension mismatch");
    const long inner = ipow(cutoff, n_modes - 1 - mode);
    const long outer = ipow(cutoff, mode);
    const long d_out = op.rows();
    if (x.rows() != outer * cutoff * inner) throw InvalidArgument("apply_local: state dimension mismatch");
    CMat out(outer * d_out * inner, x.cols());
    const CMat opt = op.transpose();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (long o = 0; o < outer; ++o) {
            Eigen::Map<const CMat> in_blk(x.col(c).data() + o * cutoff * inner, inner, cutoff);
            Eigen::Map<CMat> out_blk(out.col(c).data() + o * d_out * inner, inner, d_out);
            out_blk.noalias() = in_blk * opt;
        }
    }
    return out;
}

inline CVec apply_local(const CVec& psi, int n_modes, int cutoff, int mode, const CMat& op) {
    CMat x = psi;
    return apply_local(x, n_modes, cutoff, mode, op).col(0);
}

/// op * rho * op^dagger with op acting on one mode.
inline CMat conjugate_local(const CMat& rho, int n_modes, int cutoff, int mode, const CMat& op) {
    const CMat left = apply_local(rho, n_modes, cutoff, mode, op).adjoint();
    return apply_local(left, n_modes, cutoff, mode, op).adjoint();
}

/// Partial trace of a density matrix over one mode.
inline CMat partial_trace_mode(const CMat& rho, int n_modes, int cutoff, int mode) {
    if (n_modes < 2) throw InvalidArgument("partial_trace_mode: need at least two modes");
    const long inner = ipow(cutoff, n_modes - 1 - mode);
    const long outer = ipow(cutoff, mode);
    const long n_out = outer * inner;
    CMat out = CMat::Zero(n_out, n_out);
    for (long o1 = 0; o1 < outer; ++o1)
        for (long i1 = 0; i1 < inner; ++i1)
            for (long o2 = 0; o2 < outer; ++o2)
                for (long i2 = 0; i2 < inner; ++i2) {
                    Complex s = 0.0;
                    for (long k = 0; k < cutoff; ++k)
                        s += rho(o1 * cutoff * inner + k * inner + i1, o2 * cutoff * inner + k * inner + i2);
                    out(o1 * inner + i1, o2 * inner + i2) = s;
                }
    return out;
}

inline FockArray partial_trace(const FockArray& f, int mode) {
    const FockArray d = f.to_density();
    return FockArray::density(partial_trace_mode(d.density_data(), f.n_modes(), f.cutoff(), mode), f.n_modes() - 1,
                              f.cutoff(), f.trace_deficit(), f.trace_tol());
}

/// Kronecker product a (x) b; modes of a come first.
inline FockArray tensor(const FockArray& a, const FockArray& b) {
    if (a.cutoff() != b.cutoff()) throw InvalidArgument("tensor: cutoffs differ");
    const int n = a.n_modes() + b.n_modes();
    const double deficit = a.trace_deficit() + b.trace_deficit();
    const double tol = std::max(a.trace_tol(), b.trace_tol());
    if (a.is_ket() && b.is_ket()) {
        const CVec& x = a.ket_data();
        const CVec& y = b.ket_data();
        CVec out(x.size() * y.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
        return FockArray::ket_normalized(std::move(out), n, a.cutoff(), deficit, tol);
    }
    const CMat x = a.to_density().density_data();
    const CMat y = b.to_density().density_data();
    CMat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return FockArray::density(std::move(out), n, a.cutoff(), deficit, tol);
}

/// Population of the top Fock level of `mode`; a cheap proxy for the weight
/// an operator would push outside the truncated box.
inline double edge_population(const FockArray& f, int mode) {
    const long inner = ipow(f.cutoff(), f.n_modes() - 1 - mode);
    const long outer = ipow(f.cutoff(), mode);
    const long top = f.cutoff() - 1;
    double p = 0.0;
    for (long o = 0; o < outer; ++o)
        for (long i = 0; i < inner; ++i) {
            const long idx = o * f.cutoff() * inner + top * inner + i;
            p += f.is_ket() ? std::norm(f.ket_data()(idx)) : f.density_data()(idx, idx).real();
        }
    return p;
}

}  // namespace nongauss::fock
