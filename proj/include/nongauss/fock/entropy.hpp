#pragma once

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"

#include <cmath>
#include <limits>

namespace nongauss::fock {

inline constexpr double kEigenClamp = 1e-12;
inline constexpr double kSupportThreshold = 1e-12;

/// -sum p log2 p over a spectrum, ignoring values below `clamp`.
inline double entropy_of_spectrum(const RVec& p, double clamp = kEigenClamp) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p(k) > clamp) s -= p(k) * std::log2(p(k));
    return std::max(0.0, s);
}

inline void check_hermitian(const CMat& m, const char* who) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidState(std::string(who) + ": matrix is not Hermitian");
}

inline double von_neumann_entropy(const CMat& rho, double clamp = kEigenClamp) {
    check_hermitian(rho, "von_neumann_entropy");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues(), clamp);
}

inline double von_neumann_entropy(const FockArray& f, double clamp = kEigenClamp) {
    if (f.is_ket()) return 0.0;
    return von_neumann_entropy(f.density_data(), clamp);
}

/// Spectrum of sum_k phi_k phi_k^dagger through the Gram matrix <phi_k|phi_l>.
inline RVec ensemble_spectrum(const Ensemble& e) {
    const auto k = static_cast<Eigen::Index>(e.branches.size());
    if (k == 0) throw InvalidArgument("ensemble_spectrum: empty ensemble");
    CMat gram(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) {
            gram(i, j) = e.branches[i].dot(e.branches[j]);
            gram(j, i) = std::conj(gram(i, j));
        }
    Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double von_neumann_entropy(const Ensemble& e, double clamp = kEigenClamp) {
    if (e.branches.size() == 1) return 0.0;
    return entropy_of_spectrum(ensemble_spectrum(e), clamp);
}

/// S(rho || sigma) in bits; +infinity when rho has weight outside the
/// support of sigma (sigma eigenvalues below `support`).
inline double relative_entropy(const CMat& rho, const CMat& sigma, double support = kSupportThreshold) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw InvalidArgument("relative_entropy: dimension mismatch");
    check_hermitian(rho, "relative_entropy");
    check_hermitian(sigma, "relative_entropy");
    Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
    const RVec& s = es.eigenvalues();
    const CMat& v = es.eigenvectors();
    const CMat rho_in_sigma = v.adjoint() * rho * v;
    double outside = 0.0;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double w = rho_in_sigma(k, k).real();
        if (s(k) < support)
            outside += w;
        else
            cross += w * std::log2(s(k));
    }
    if (outside > 1e-10) return std::numeric_limits<double>::infinity();
    const double value = -von_neumann_entropy(rho) - cross;
    if (value < -1e-6) throw InvalidState("relative_entropy: negative value; inputs are not valid densities");
    return std::max(0.0, value);
}

inline double relative_entropy(const FockArray& rho, const FockArray& sigma, double support = kSupportThreshold) {
    if (rho.n_modes() != sigma.n_modes() || rho.cutoff() != sigma.cutoff())
        throw InvalidArgument("relative_entropy: shape mismatch");
    return relative_entropy(rho.to_density().density_data(), sigma.to_density().density_data(), support);
}

}  // namespace nongauss::fock
