#pragma once

#include <Eigen/Dense>

#include <complex>

namespace nongauss {

using Complex = std::complex<double>;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// exp(-i H) for a Hermitian H, via its eigendecomposition.
inline CMat expm_hermitian(const CMat& h) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const RVec& w = es.eigenvalues();
    CVec phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(Complex(0.0, -w(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace nongauss
