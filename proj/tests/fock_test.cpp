#include "nongauss/cli/suites.hpp"
#include "nongauss/fock/array.hpp"
#include "nongauss/fock/conditional_map.hpp"
#include "nongauss/fock/entropy.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/maps.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace nongauss;
using namespace nongauss::fock;

namespace {

double max_abs(const RMat& a) { return a.cwiseAbs().maxCoeff(); }

CVec basis(int d, int n) {
    CVec v = CVec::Zero(d);
    v(n) = 1.0;
    return v;
}

FockArray diag_density(const std::vector<double>& p, int d) {
    CMat rho = CMat::Zero(d, d);
    for (std::size_t n = 0; n < p.size(); ++n) rho(static_cast<long>(n), static_cast<long>(n)) = p[n];
    return FockArray::density(rho, 1, d);
}

}  // namespace

TEST(Ladder, TwoLevel) {
    CMat expected = CMat::Zero(2, 2);
    expected(0, 1) = 1.0;
    EXPECT_EQ(ladder(2), expected);
    EXPECT_THROW(ladder(1), InvalidArgument);
}

TEST(Ladder, CommutatorIsIdentityAwayFromEdge) {
    const int d = 12;
    const CMat a = ladder(d);
    const CMat c = a * a.adjoint() - a.adjoint() * a;
    EXPECT_LT((c.topLeftCorner(d - 1, d - 1) - CMat::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BuildState, FockAndCoherent) {
    const FockArray f = build_state(StateSpec::fock_n(1), 10);
    EXPECT_EQ(f.ket_data(), basis(10, 1));
    const FockArray c = build_state(StateSpec::coherent({1.0, 0.0}), 30);
    double fact = 1.0;
    for (int n = 0; n < 30; ++n) {
        if (n > 0) fact *= n;
        EXPECT_NEAR(c.ket_data()(n).real(), std::exp(-0.5) / std::sqrt(fact), 1e-12);
    }
}

TEST(BuildState, TruncationSuggestsLargerCutoff) {
    try {
        build_state(StateSpec::coherent({4.0, 0.0}), 10);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_GT(e.suggested_cutoff(), 10);
        EXPECT_NO_THROW(build_state(StateSpec::coherent({4.0, 0.0}), e.suggested_cutoff()));
    }
}

TEST(BuildUnitary, DisplacementOfVacuumIsCoherent) {
    const int d = 40;
    const Complex alpha(1.2, -0.5);
    const CVec psi = build_unitary({OpKind::displacement, alpha, 0.0}, d) * basis(d, 0);
    const CVec ref = build_state(StateSpec::coherent(alpha), d).ket_data();
    EXPECT_LT((psi - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildUnitary, SqueezedVacuumAmplitudes) {
    // <2n|S_r|0> = (-tanh r)^n sqrt((2n)!)/(2^n n!) / sqrt(cosh r)
    const int d = 40;
    const double r = 0.5;
    const CVec psi = build_unitary({OpKind::squeeze, {}, r}, d) * basis(d, 0);
    double c = 1.0 / std::sqrt(std::cosh(r));
    for (int n = 0; 2 * n < d; ++n) {
        EXPECT_NEAR(psi(2 * n).real(), c, 1e-9);
        if (2 * n + 1 < d) EXPECT_NEAR(std::abs(psi(2 * n + 1)), 0.0, 1e-12);
        c *= -std::tanh(r) * std::sqrt((2.0 * n + 1) * (2.0 * n + 2)) / (2.0 * (n + 1));
    }
}

TEST(BuildUnitary, KerrAndRotationAreDiagonalPhases) {
    const int d = 8;
    const CMat k = build_unitary({OpKind::kerr, {}, 0.3}, d);
    const CMat r = build_unitary({OpKind::rotation, {}, 0.3}, d);
    for (int n = 0; n < d; ++n) {
        EXPECT_NEAR(std::abs(k(n, n) - std::exp(Complex(0, -0.3 * n * n))), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(r(n, n) - std::exp(Complex(0, -0.3 * n))), 0.0, 1e-14);
    }
    EXPECT_LT((kerr_matrix(2 * kPi, d) - CMat::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildUnitary, BeamsplitterConservesPhotonNumber) {
    const int d = 10;
    const CMat u = build_unitary({OpKind::beamsplitter, {}, 0.5}, d);
    // |1,0> -> sqrt(tau)|1,0> - sqrt(1-tau)|0,1> up to the sign convention; weights 1/2 each.
    const CVec in = u * basis(d * d, 1 * d + 0);
    EXPECT_NEAR(std::norm(in(1 * d + 0)), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(in(0 * d + 1)), 0.5, 1e-12);
}

TEST(OperatorChain, SymplecticUnitaryMatchesDenseProduct) {
    const int d = 30;
    const gaussian::SymplecticOp op =
        gaussian::displacement(1, 0, {0.3, 0.1}).after(gaussian::rotation(1, 0, 0.4)).after(gaussian::squeezing(1, 0, 0.2));
    const CVec vac = basis(d, 0);
    const CVec a = symplectic_unitary(op, d).apply(vac);
    const CVec b = displacement_matrix({0.3, 0.1}, d) * rotation_matrix(0.4, d) * squeeze_matrix(0.2, d) * vac;
    // Equal up to a global phase.
    const Complex overlap = a.dot(b);
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-9);
}

TEST(ApplyMap, IdentityLeavesStateUnchanged) {
    const int d = 12;
    const maps::MapDescriptor id = maps::identity(d);
    cli::Rng rng(2);
    const FockArray rho = cli::random_density(1, d, rng);
    const MapOutput out = apply_map(rho, id.body());
    EXPECT_LT((out.state.density_data() - rho.density_data()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(out.success_probability, 1.0, 1e-14);
}

TEST(ApplyMap, PnsOnSinglePhoton) {
    const int d = 10;
    const MapOutput out = apply_map(build_state(StateSpec::fock_n(1), d), maps::pns(d).body());
    EXPECT_LT((out.state.ket_data() - basis(d, 0)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(out.success_probability, 1.0, 1e-14);
    EXPECT_NEAR(moments(out.state).n(0).real(), 0.0, 1e-14);
    EXPECT_THROW(apply_map(build_state(StateSpec::fock_n(0), d), maps::pns(d).body()), ZeroProbabilityBranch);
}

TEST(ApplyMap, PnsOnTmsvMatchesOracle) {
    // a_B on the TMSV weights |n,n> by n: <n_A> = <n^2>/<n> = 2N+1 and <n_B> = 2N.
    const int d = 40;
    const double n_s = 1.0;
    const FockArray in = build_state(StateSpec::tmsv(n_s), d);
    const MapOutput out = apply_map(in, maps::pns(d).body(), 1);
    const MomentRecord m = moments(out.state);
    EXPECT_NEAR(m.n(0).real(), 2 * n_s + 1, 1e-6);
    EXPECT_NEAR(m.n(1).real(), 2 * n_s, 1e-6);
    // Direct matrix arithmetic at the same cutoff.
    CMat op = Eigen::kroneckerProduct(CMat::Identity(d, d), ladder(d));
    CVec psi = op * in.ket_data();
    psi.normalize();
    const CMat na = Eigen::kroneckerProduct(number_op(d), CMat::Identity(d, d));
    EXPECT_NEAR(psi.dot(na * psi).real(), m.n(0).real(), 1e-12);
    EXPECT_NEAR(out.success_probability, n_s, 1e-6);
}

TEST(VonNeumann, Examples) {
    EXPECT_NEAR(von_neumann_entropy(build_state(StateSpec::coherent({0.7, 0.2}), 30)), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(build_state(StateSpec::thermal(1.0), 60)), 2.0, 1e-4);
    EXPECT_NEAR(von_neumann_entropy(diag_density({0.5, 0.5}, 4)), 1.0, 1e-14);
    CMat bad = CMat::Identity(3, 3);
    bad(0, 1) = 0.5;
    EXPECT_THROW(von_neumann_entropy(bad), InvalidState);
}

TEST(VonNeumann, InvariantUnderUnitaries) {
    cli::Rng rng(8);
    const int d = 10;
    const FockArray rho = cli::random_density(1, d, rng);
    const CMat u = cli::random_unitary(d, rng);
    const CMat rot = u * rho.density_data() * u.adjoint();
    EXPECT_NEAR(von_neumann_entropy(rot), von_neumann_entropy(rho), 1e-10);
}

TEST(RelativeEntropy, Examples) {
    const int d = 60;
    const FockArray zero = build_state(StateSpec::fock_n(0), d).to_density();
    const FockArray one = build_state(StateSpec::fock_n(1), d).to_density();
    EXPECT_EQ(relative_entropy(zero, one), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(relative_entropy(one, build_state(StateSpec::thermal(1.0), d)), 2.0, 1e-3);
    EXPECT_NEAR(relative_entropy(one, one), 0.0, 1e-12);
}

TEST(RelativeEntropy, NonNegativeOnRandomPairs) {
    cli::Rng rng(12);
    for (int i = 0; i < 10; ++i) {
        const FockArray a = cli::random_density(1, 8, rng);
        const FockArray b = cli::random_density(1, 8, rng);
        EXPECT_GE(relative_entropy(a, b), -1e-10);
    }
}

TEST(Moments, CoherentFockAndTmsv) {
    const gaussian::GaussianState c = gaussify(build_state(StateSpec::coherent({1.0, 0.0}), 30));
    EXPECT_NEAR(c.mean()(0), 2.0, 1e-9);
    EXPECT_NEAR(c.mean()(1), 0.0, 1e-12);
    EXPECT_LT(max_abs(c.cov() - RMat::Identity(2, 2)), 1e-8);

    // Fock oracle: quadrature variance <q^2> with q = a + a^dag.
    const int d = 10;
    const FockArray one = build_state(StateSpec::fock_n(1), d);
    const CMat q = ladder(d) + ladder(d).adjoint();
    const double var_q = one.ket_data().dot(q * q * one.ket_data()).real();
    const gaussian::GaussianState g1 = gaussify(one);
    EXPECT_NEAR(g1.cov()(0, 0), var_q, 1e-12);
    EXPECT_LT(max_abs(g1.cov() - 3.0 * RMat::Identity(2, 2)), 1e-12);
    EXPECT_LT(max_abs(g1.mean()), 1e-14);

    const gaussian::GaussianState t = gaussify(build_state(StateSpec::tmsv(1.0), 40));
    EXPECT_LT(max_abs(t.cov() - gaussian::tmsv_state(1.0).cov()), 1e-8);
}

TEST(Moments, MissingEntriesRejected) {
    EXPECT_THROW(covariance_from_moments(MomentRecord::empty(1)), InvalidArgument);
}

TEST(Gaussify, BpsOutputOnCoherent) {
    const int d = 40;
    for (double alpha : {0.5, 1.0, 2.0}) {
        const FockArray in = build_state(StateSpec::coherent({alpha, 0.0}), d);
        const MapOutput out = apply_map(in, maps::bps(d).body());
        const gaussian::GaussianState g = gaussify(out.state);
        EXPECT_LT(max_abs(g.mean()), 1e-10);
        EXPECT_NEAR(g.cov()(0, 0), 4 * alpha * alpha + 1, 1e-8);
        EXPECT_NEAR(g.cov()(1, 1), 1.0, 1e-8);
        EXPECT_NEAR(g.cov()(0, 1), 0.0, 1e-10);
    }
}

TEST(GaussianToFock, Examples) {
    const int d = 20;
    const FockArray vac = gaussian_to_fock(gaussian::GaussianState::vacuum(1), d);
    EXPECT_NEAR(vac.density_data()(0, 0).real(), 1.0, 1e-10);
    const FockArray th = gaussian_to_fock(gaussian::GaussianState::thermal(1.0), 40);
    for (int n = 0; n < 40; ++n) EXPECT_NEAR(th.density_data()(n, n).real(), std::pow(0.5, n + 1), 1e-9);
    const FockArray tm = gaussian_to_fock(gaussian::tmsv_state(1.0), 30);
    const FockArray ref = build_state(StateSpec::tmsv(1.0), 30).to_density();
    EXPECT_LT((tm.density_data() - ref.density_data()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(GaussianToFock, ReproducesMoments) {
    cli::Rng rng(41);
    for (int n : {1, 2}) {
        for (int i = 0; i < 4; ++i) {
            const gaussian::GaussianState g = cli::random_gaussian(n, rng);
            const FockArray f = gaussian_to_fock(g, n == 1 ? 40 : 24);
            const gaussian::GaussianState h = gaussify(f);
            EXPECT_LT(max_abs(h.mean() - g.mean()), 1e-5);
            EXPECT_LT(max_abs(h.cov() - g.cov()), 1e-5);
        }
    }
}

TEST(DeltaG, GaussianStatesVanish) {
    cli::Rng rng(43);
    for (int i = 0; i < 5; ++i) {
        const gaussian::GaussianState g = cli::random_gaussian(1, rng);
        EXPECT_NEAR(delta_g(gaussian_to_fock(g, 40)), 0.0, 1e-4);
    }
    EXPECT_NEAR(delta_g(build_state(StateSpec::coherent({1.0, 0.0}), 30)), 0.0, 1e-8);
}

TEST(DeltaG, SinglePhoton) { EXPECT_NEAR(delta_g(build_state(StateSpec::fock_n(1), 30)), 2.0, 1e-3); }

TEST(DeltaG, PhaseFlipMixtureAboveBound) {
    const int d = 40;
    const double alpha = 2.0;
    const MapOutput out = apply_map(build_state(StateSpec::coherent({alpha, 0.0}), d), maps::bps(d).body());
    const double bound = gaussian::thermal_entropy((std::sqrt(4 * alpha * alpha + 1) - 1) / 2) - 1.0;
    EXPECT_GE(delta_g(out.state), bound);
}

TEST(DeltaG, RelativeEntropyRouteAgrees) {
    for (double a : {0.3, 0.8, 1.5}) {
        const FockArray cat = build_state(StateSpec::cat({a, 0.0}), 40);
        EXPECT_NEAR(delta_g_relative(cat), delta_g(cat), 1e-6);
    }
    cli::Rng rng(47);
    const FockArray mixed = cli::random_density(1, 12, rng);
    EXPECT_NEAR(delta_g_relative(mixed), delta_g(mixed), 1e-6);
}

TEST(FockArray, ShapeAndTraceChecks) {
    EXPECT_THROW(FockArray::ket(CVec::Zero(5), 1, 4), InvalidArgument);
    EXPECT_THROW(FockArray::ket(CVec::Zero(4), 1, 4), InvalidState);
    // Trace below 1 is recorded as truncation deficit and normalized away.
    const CMat rho = (1.0 - 1e-8) / 4.0 * CMat::Identity(4, 4);
    const FockArray f = FockArray::density(rho, 1, 4);
    EXPECT_NEAR(f.density_data().trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(f.trace_deficit(), 1e-8, 1e-14);
    EXPECT_THROW(FockArray::density(0.5 * rho, 1, 4), TruncationError);
}

TEST(Ensemble, DensityMatchesBranches) {
    const int d = 8;
    Ensemble e{1, d, {basis(d, 0) / std::sqrt(2.0), basis(d, 3) / std::sqrt(2.0)}, 0.0};
    const FockArray f = e.to_fock();
    EXPECT_NEAR(von_neumann_entropy(e), 1.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(f), 1.0, 1e-12);
    EXPECT_NEAR(delta_g(e), delta_g(f), 1e-12);
}
