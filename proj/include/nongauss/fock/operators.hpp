#pragma once

// Truncated Fock matrices of bosonic operators. Single-mode displacement and
// squeezing exponentiate their tridiagonal generators in a padded space and
// keep the D-box block. Passive two-mode unitaries are exact per
// photon-number sector; the two-mode squeezer exponentiates a padded generator.

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

namespace nongauss::fock {

inline void check_cutoff(int d) {
    if (d < 2) throw InvalidArgument("cutoff must be >= 2");
    if (d > kMaxCutoff) throw InvalidArgument("cutoff exceeds supported maximum");
}

/// Annihilation operator: a|n> = sqrt(n)|n-1>.
inline CMat ladder(int d) {
    check_cutoff(d);
    CMat a = CMat::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline CMat number_op(int d) {
    check_cutoff(d);
    CMat n = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

/// exp(-i theta a^dag a).
inline CMat rotation_matrix(double theta, int d) {
    check_cutoff(d);
    CMat u = CMat::Zero(d, d);
    for (int n = 0; n < d; ++n) u(n, n) = std::exp(Complex(0.0, -theta * n));
    return u;
}

/// exp(-i gamma (a^dag a)^2).
inline CMat kerr_matrix(double gamma, int d) {
    check_cutoff(d);
    CMat u = CMat::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        // Reduce the phase first: gamma * n^2 loses digits for large n.
        const double phase = std::fmod(gamma * static_cast<double>(n) * n, 2.0 * kPi);
        u(n, n) = std::exp(Complex(0.0, -phase));
    }
    return u;
}

namespace detail {

/// Eigensystem of a real symmetric tridiagonal matrix with zero diagonal.
struct Tridiagonal {
    RMat q;
    RVec lambda;
};

enum class Generator { displacement, squeeze_even, squeeze_odd };

/// Sector generators, rephased by i^j to real symmetric form:
/// a^dag - a has off-diagonal sqrt(j+1); (a^2 - a^dag^2)/2 restricted to the
/// parity sector m = 2j + p has off-diagonal -sqrt((m+1)(m+2))/2.
inline std::shared_ptr<const Tridiagonal> tridiagonal(Generator g, int size) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const Tridiagonal>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_pair(static_cast<int>(g), size);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    RVec diag = RVec::Zero(size);
    RVec off(std::max(0, size - 1));
    for (int j = 0; j + 1 < size; ++j) {
        if (g == Generator::displacement) {
            off(j) = std::sqrt(j + 1.0);
        } else {
            const double m = 2.0 * j + (g == Generator::squeeze_odd ? 1.0 : 0.0);
            off(j) = -0.5 * std::sqrt((m + 1.0) * (m + 2.0));
        }
    }
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    auto t = std::make_shared<Tridiagonal>(Tridiagonal{es.eigenvectors(), es.eigenvalues()});
    cache.emplace(key, t);
    return t;
}

/// Top-left rows x rows block of exp(-i x T) rephased back by i^(j-k).
inline CMat sector_exponential(const Tridiagonal& t, double x, long rows) {
    const RMat a = t.q.topRows(rows);
    CVec ph(t.lambda.size());
    for (Eigen::Index l = 0; l < ph.size(); ++l) ph(l) = std::polar(1.0, -x * t.lambda(l));
    CMat e = (a.cast<Complex>() * ph.asDiagonal()) * a.transpose().cast<Complex>();
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (long j = 0; j < rows; ++j)
        for (long k = 0; k < rows; ++k) e(j, k) *= ipow[((j - k) % 4 + 4) % 4];
    return e;
}

inline constexpr int kMaxPadded = 2048;

/// Padded dimension for exponentiating a generator whose action spreads the
/// D-box by `spread`, rounded up to a few cached sizes.
inline int padded(int d, double spread) {
    const double want = std::max(2.0 * d, 0.5 * d * spread) + 40.0;
    for (int p : {128, 192, 256, 384, 512, 768, 1024, 1536, kMaxPadded})
        if (p >= want) return p;
    throw TruncationError("single-mode generator needs padding beyond " + std::to_string(kMaxPadded) +
                              " at cutoff " + std::to_string(d),
                          d);
}

}  // namespace detail

/// exp(alpha a^dag - alpha^* a) projected on the D-box. The generator is
/// exponentiated in a padded space, so the result is a block of a unitary.
inline CMat displacement_matrix(Complex alpha, int d) {
    check_cutoff(d);
    const double a = std::abs(alpha);
    if (a == 0.0) return CMat::Identity(d, d);
    const auto t = detail::tridiagonal(detail::Generator::displacement, detail::padded(d, 1.0));
    CMat m = detail::sector_exponential(*t, a, d);
    const double phi = std::arg(alpha);
    for (int i = 0; i < d; ++i)
        for (int n = 0; n < d; ++n) m(i, n) = Complex(m(i, n).real(), 0.0) * std::polar(1.0, phi * (i - n));
    return m;
}

/// exp[r (a^2 - a^dag^2) / 2] projected on the D-box, built per parity sector.
inline CMat squeeze_matrix(double r, int d) {
    check_cutoff(d);
    if (r == 0.0) return CMat::Identity(d, d);
    const int half = detail::padded(d, std::exp(2.0 * std::abs(r))) / 2;
    CMat s = CMat::Zero(d, d);
    for (int p = 0; p < 2; ++p) {
        const auto t = detail::tridiagonal(p == 0 ? detail::Generator::squeeze_even : detail::Generator::squeeze_odd, half);
        const long rows = (d - p + 1) / 2;
        const CMat e = detail::sector_exponential(*t, r, rows);
        for (long j = 0; j < rows; ++j)
            for (long k = 0; k < rows; ++k) s(2 * j + p, 2 * k + p) = e(j, k).real();
    }
    return s;
}

/// Generator G with u = exp(-i G) for a unitary u (principal branch).
inline CMat unitary_generator(const CMat& u) {
    Eigen::ComplexSchur<CMat> schur(u);
    const CMat& t = schur.matrixT();
    const CMat& q = schur.matrixU();
    CVec phases(t.rows());
    for (Eigen::Index k = 0; k < t.rows(); ++k) phases(k) = -std::arg(t(k, k));
    CMat g = q * phases.asDiagonal() * q.adjoint();
    return 0.5 * (g + g.adjoint());
}

/// Fock unitary of a two-mode passive transform with Heisenberg action a -> u a.
inline SparseOp passive_two_mode(const CMat& u, int d) {
    check_cutoff(d);
    if (u.rows() != 2 || u.cols() != 2) throw InvalidArgument("passive_two_mode: u must be 2x2");
    const CMat g = unitary_generator(u);
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int n = 0; n <= 2 * (d - 1); ++n) {
        const int dim = n + 1;
        CMat h = CMat::Zero(dim, dim);
        for (int k = 0; k <= n; ++k) {
            h(k, k) = g(0, 0) * static_cast<double>(k) + g(1, 1) * static_cast<double>(n - k);
            if (k < n) h(k + 1, k) = g(0, 1) * std::sqrt((k + 1.0) * (n - k));
            if (k > 0) h(k - 1, k) = g(1, 0) * std::sqrt(static_cast<double>(k) * (n - k + 1.0));
        }
        const CMat block = expm_hermitian(h);
        const int kmin = std::max(0, n - d + 1);
        const int kmax = std::min(n, d - 1);
        for (int i = kmin; i <= kmax; ++i)
            for (int j = kmin; j <= kmax; ++j) {
                const Complex v = block(i, j);
                if (std::abs(v) > 1e-15) trip.emplace_back(i * d + (n - i), j * d + (n - j), v);
            }
    }
    SparseOp op(static_cast<long>(d) * d, static_cast<long>(d) * d);
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

/// Beamsplitter with transmissivity tau, matching gaussian::beamsplitter.
inline SparseOp beamsplitter_op(double tau, int d) {
    const RMat s = gaussian::beamsplitter(2, 0, 1, tau).matrix();
    return passive_two_mode(gaussian::passive_to_unitary(s), d);
}

/// exp[r (a^dag b^dag - a b)], via padded tridiagonal generators per
/// photon-difference sector.
inline SparseOp two_mode_squeeze_op(double r, int d) {
    check_cutoff(d);
    const int pad = std::max(60, d + static_cast<int>(40.0 * std::abs(r)));
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int k = -(d - 1); k <= d - 1; ++k) {
        const int ak = std::abs(k);
        const int inside = d - ak;  // basis states |n+k, n> with both indices < d
        const int dim = inside + pad;
        CMat h = CMat::Zero(dim, dim);
        for (int n = 0; n + 1 < dim; ++n) {
            const double c = r * std::sqrt((n + ak + 1.0) * (n + 1.0));
            h(n + 1, n) = Complex(0.0, c);
            h(n, n + 1) = Complex(0.0, -c);
        }
        const CMat block = expm_hermitian(h);
        auto index = [&](int n) { return k >= 0 ? (n + k) * d + n : n * d + (n + ak); };
        for (int i = 0; i < inside; ++i)
            for (int j = 0; j < inside; ++j) {
                const Complex v = block(i, j);
                if (std::abs(v) > 1e-15) trip.emplace_back(index(i), index(j), v);
            }
    }
    SparseOp op(static_cast<long>(d) * d, static_cast<long>(d) * d);
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

enum class OpKind { displacement, rotation, squeeze, two_mode_squeeze, beamsplitter, kerr };

struct OpSpec {
    OpKind kind = OpKind::rotation;
    Complex alpha{};
    double value = 0.0;
};

/// Dense truncated unitary. Two-mode kinds return a D^2 x D^2 matrix.
inline CMat build_unitary(const OpSpec& spec, int d) {
    switch (spec.kind) {
        case OpKind::displacement: return displacement_matrix(spec.alpha, d);
        case OpKind::rotation: return rotation_matrix(spec.value, d);
        case OpKind::squeeze: return squeeze_matrix(spec.value, d);
        case OpKind::kerr: return kerr_matrix(spec.value, d);
        case OpKind::two_mode_squeeze: return CMat(two_mode_squeeze_op(spec.value, d));
        case OpKind::beamsplitter: return CMat(beamsplitter_op(spec.value, d));
    }
    throw InvalidArgument("build_unitary: unknown kind");
}

/// A product of local and global operators, applied in list order.
class OperatorChain {
public:
    struct Local {
        int mode;
        CMat op;
    };
    struct Global {
        SparseOp op;
    };
    using Step = std::variant<Local, Global>;

    OperatorChain(int n_modes, int cutoff) : n_modes_(n_modes), cutoff_(cutoff) {}

    OperatorChain& then_local(int mode, CMat op) {
        if (mode < 0 || mode >= n_modes_) throw InvalidArgument("OperatorChain: mode out of range");
        steps_.push_back(Local{mode, std::move(op)});
        return *this;
    }
    OperatorChain& then_global(SparseOp op) {
        if (op.rows() != ipow(cutoff_, n_modes_)) throw InvalidArgument("OperatorChain: dimension mismatch");
        steps_.push_back(Global{std::move(op)});
        return *this;
    }

    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }

    /// Applies every step to each column of x.
    CMat apply_columns(CMat x) const {
        for (const auto& step : steps_) {
            if (const auto* l = std::get_if<Local>(&step))
                x = apply_local(x, n_modes_, cutoff_, l->mode, l->op);
            else
                x = std::get<Global>(step).op * x;
        }
        return x;
    }

    CVec apply(const CVec& psi) const {
        CMat x = psi;
        return apply_columns(std::move(x)).col(0);
    }

    /// U rho U^dagger.
    CMat conjugate(const CMat& rho) const {
        const CMat half = apply_columns(rho).adjoint();
        return apply_columns(half).adjoint();
    }

    FockArray apply(const FockArray& f) const {
        if (f.n_modes() != n_modes_ || f.cutoff() != cutoff_) throw InvalidArgument("OperatorChain: state mismatch");
        if (f.is_ket()) return FockArray::ket(apply(f.ket_data()), n_modes_, cutoff_, f.trace_deficit(), f.trace_tol());
        CMat out = conjugate(f.density_data());
        out = 0.5 * (out + out.adjoint());
        return FockArray::density(std::move(out), n_modes_, cutoff_, f.trace_deficit(), f.trace_tol());
    }

    CMat dense() const {
        const long n = ipow(cutoff_, n_modes_);
        return apply_columns(CMat::Identity(n, n));
    }

private:
    int n_modes_;
    int cutoff_;
    std::vector<Step> steps_;
};

/// Passive unitary on 1 or 2 modes, Heisenberg a -> u a.
inline OperatorChain passive_chain(const CMat& u, int d) {
    const int n = static_cast<int>(u.rows());
    OperatorChain chain(n, d);
    if (n == 1) {
        chain.then_local(0, rotation_matrix(-std::arg(u(0, 0)), d));
    } else if (n == 2) {
        chain.then_global(passive_two_mode(u, d));
    } else {
        throw InvalidArgument("passive_chain: only 1 or 2 modes are supported");
    }
    return chain;
}

/// Fock realization of a Gaussian unitary with phase-space action (S, dx)
/// on 1 or 2 modes: passive, squeezers, passive, then displacement.
inline OperatorChain symplectic_unitary(const gaussian::SymplecticOp& op, int d) {
    const int n = op.n_modes();
    if (n > 2) throw InvalidArgument("symplectic_unitary: only 1 or 2 modes are supported");
    const gaussian::EulerDecomposition e = gaussian::euler_decompose(op.matrix());
    OperatorChain chain(n, d);
    auto add_passive = [&](const CMat& u) {
        if (n == 1)
            chain.then_local(0, rotation_matrix(-std::arg(u(0, 0)), d));
        else
            chain.then_global(passive_two_mode(u, d));
    };
    add_passive(e.u_right);
    for (int k = 0; k < n; ++k)
        if (std::abs(e.r[k]) > 1e-14) chain.then_local(k, squeeze_matrix(e.r[k], d));
    add_passive(e.u_left);
    for (int k = 0; k < n; ++k) {
        const Complex alpha(0.5 * op.delta_x()(2 * k), 0.5 * op.delta_x()(2 * k + 1));
        if (std::abs(alpha) > 0.0) chain.then_local(k, displacement_matrix(alpha, d));
    }
    return chain;
}

}  // namespace nongauss::fock
