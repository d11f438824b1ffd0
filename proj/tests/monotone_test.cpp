#include "nongauss/cli/suites.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/maps.hpp"
#include "nongauss/monotone/delta_tilde.hpp"
#include "nongauss/monotone/input_family.hpp"
#include "nongauss/monotone/optimizer.hpp"
#include "nongauss/monotone/wick.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nongauss;
using namespace nongauss::monotone;

namespace {

double max_abs(const RMat& a) { return a.cwiseAbs().maxCoeff(); }

InputParams params(Complex alpha, double theta, double r, double n_s) {
    InputParams p;
    p.alpha = alpha;
    p.theta = theta;
    p.r = r;
    p.n_s = n_s;
    return p;
}

// a_A, a_A^dag, a_B, a_B^dag applied to a two-mode ket, mode 0 most significant.
CVec apply_ladder(const Ladder& l, const CVec& psi, int d) {
    const CMat a = l.dagger ? CMat(fock::ladder(d).adjoint()) : fock::ladder(d);
    return fock::apply_local(psi, 2, d, l.mode, a);
}

// <psi| w_1 w_2 ... w_n |psi>
Complex word_expectation(const std::vector<Ladder>& word, const CVec& psi, int d) {
    CVec v = psi;
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_ladder(*it, v, d);
    return psi.dot(v);
}

}  // namespace

TEST(InputFamily, TrivialParameters) {
    const gaussian::GaussianState vac = input_family_gaussian(params(0.0, 0.0, 0.0, 0.0));
    EXPECT_LT(max_abs(vac.cov() - RMat::Identity(4, 4)), 1e-14);
    EXPECT_LT(max_abs(vac.mean()), 1e-14);
    const gaussian::GaussianState z = input_family_gaussian(params(0.0, 0.0, 0.0, 1.3));
    EXPECT_LT(max_abs(z.cov() - gaussian::tmsv_state(1.3).cov()), 1e-14);
    EXPECT_THROW(params(0.0, 0.0, 0.0, -1.0).validate(), InvalidArgument);
}

TEST(InputFamily, FockAndPhaseSpaceAgree) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const InputParams p = params(std::polar(0.8 * u(rng), 6.0 * u(rng)), 6.0 * u(rng), 0.4 * u(rng), 0.6 * u(rng));
        const gaussian::GaussianState g = input_family_gaussian(p);
        const gaussian::GaussianState h = fock::gaussify(input_family_fock_auto(p, 1e-10));
        EXPECT_LT(max_abs(g.mean() - h.mean()), 1e-6);
        EXPECT_LT(max_abs(g.cov() - h.cov()), 1e-6);
        EXPECT_NEAR(0.25 * (g.cov().bottomRightCorner(2, 2).trace() + g.mean().tail(2).squaredNorm()) - 0.5,
                    p.input_energy(), 1e-10);
    }
}

TEST(InputFamily, RestrictedParamsMeetBudget) {
    for (double te : {0.2, 0.7, 1.0})
        for (double ta : {0.0, 0.4, 1.0})
            for (double tn : {0.0, 0.5, 1.0}) {
                const InputParams p = restricted_params(3.0, te, ta, tn, 0.3, 0.1);
                EXPECT_NEAR(p.input_energy(), te * 3.0, 1e-9);
            }
}

TEST(Wick, FourSymbolWordMatchesFock) {
    const int d = 50;
    const double n_s = 1.0;
    const std::vector<std::string> word{"aB+", "aA", "aB", "aB"};
    const Complex w = tmsv_wick_expectation(word, n_s);
    const CVec psi = fock::build_state(fock::StateSpec::tmsv(n_s), d, 1e-12, 1e-12).ket_data();
    std::vector<Ladder> parsed;
    for (const auto& s : word) parsed.push_back(parse_ladder(s));
    EXPECT_NEAR(std::abs(w - word_expectation(parsed, psi, d)), 0.0, 1e-8);
}

TEST(Wick, RandomWordsMatchFock) {
    const int d = 40;
    const double n_s = 0.6;
    const CVec psi = fock::build_state(fock::StateSpec::tmsv(n_s), d, 1e-12, 1e-12).ket_data();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 12; ++i) {
        std::vector<Ladder> word;
        for (int k = 0; k < 4; ++k) word.push_back({static_cast<int>(rng() % 2), rng() % 2 == 1});
        EXPECT_NEAR(std::abs(tmsv_wick_expectation(word, n_s) - word_expectation(word, psi, d)), 0.0, 1e-8);
    }
}

TEST(Wick, PairsOddWordsAndLabels) {
    EXPECT_NEAR(tmsv_wick_expectation(std::vector<std::string>{"aA", "aB"}, 2.0).real(), std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(tmsv_wick_expectation(std::vector<std::string>{"aA+", "aA"}, 2.0).real(), 2.0, 1e-14);
    EXPECT_EQ(tmsv_wick_expectation(std::vector<std::string>{"aA", "aB", "aB+"}, 1.0), Complex(0.0));
    EXPECT_THROW(tmsv_wick_expectation(std::vector<std::string>{"aC"}, 1.0), InvalidArgument);
}

TEST(AnalyticOutput, PhotonAddedVacuum) {
    const gaussian::GaussianState g = analytic_output_covariance(params(0.0, 0.0, 0.0, 0.0), Conditioning::addition);
    RMat expected = RMat::Identity(4, 4);
    expected.bottomRightCorner(2, 2) *= 3.0;
    EXPECT_LT(max_abs(g.cov() - expected), 1e-12);
    EXPECT_LT(max_abs(g.mean()), 1e-12);
    EXPECT_THROW(analytic_output(params(0.0, 0.0, 0.0, 0.0), Conditioning::subtraction), ZeroProbabilityBranch);
}

TEST(AnalyticOutput, SubtractionAtZeroAlphaGivesTwoBits) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const InputParams p = params(0.0, 6.28 * u(rng), 0.8 * u(rng), 0.05 + 2.0 * u(rng));
        EXPECT_NEAR(analytic_delta(p, Conditioning::subtraction), 2.0, 1e-3);
        EXPECT_NEAR(analytic_delta(p, Conditioning::addition), 2.0, 1e-3);
    }
}

TEST(AnalyticOutput, MatchesFockAtModerateParameters) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int d = 60;
    for (int i = 0; i < 6; ++i) {
        const InputParams p = params(std::polar(0.7 * u(rng), 6.28 * u(rng)), 6.28 * u(rng), 0.3 * u(rng), 0.1 + 0.5 * u(rng));
        for (auto [which, map] : {std::pair{Conditioning::subtraction, maps::pns(d)},
                                  std::pair{Conditioning::addition, maps::pna(d)}}) {
            const gaussian::GaussianState g = analytic_output_covariance(p, which);
            const fock::FockArray in = input_family_fock(p, d, 1e-9);
            const gaussian::GaussianState h = fock::gaussify(fock::apply_map(in, map.body(), 1).state);
            EXPECT_LT(max_abs(g.cov() - h.cov()), 1e-4);
            EXPECT_LT(max_abs(g.mean() - h.mean()), 1e-4);
        }
    }
}

TEST(Optimizer, FindsQuadraticMaximum) {
    const Objective f = [](const Point& x) { return -(x[0] - 0.3) * (x[0] - 0.3) - 2.0 * (x[1] + 0.2) * (x[1] + 0.2); };
    OptimizerConfig cfg;
    const OptimizeResult r = maximize(f, {{0.0, 0.0}, {0.9, 0.9}, {-0.8, 0.5}}, {-1.0, -1.0}, {1.0, 1.0}, {0.2, 0.2}, cfg);
    EXPECT_NEAR(r.x[0], 0.3, 1e-4);
    EXPECT_NEAR(r.x[1], -0.2, 1e-4);
    EXPECT_NEAR(r.value, 0.0, 1e-8);
    const OptimizeResult again = maximize(f, {{0.0, 0.0}, {0.9, 0.9}, {-0.8, 0.5}}, {-1.0, -1.0}, {1.0, 1.0}, {0.2, 0.2}, cfg);
    EXPECT_EQ(r.x, again.x);
    EXPECT_EQ(r.evaluations, again.evaluations);
}

TEST(Optimizer, StaysInsideBox) {
    const Objective f = [](const Point& x) { return x[0]; };
    const OptimizeResult r = maximize(f, {{0.0}}, {-1.0}, {0.5}, {0.1}, OptimizerConfig{});
    EXPECT_NEAR(r.x[0], 0.5, 1e-9);
    EXPECT_THROW(maximize(f, {}, {-1.0}, {0.5}, {0.1}, OptimizerConfig{}), InvalidArgument);
}

TEST(DeltaTilde, SubtractionAndAddition) {
    for (const auto& map : {maps::pns(24), maps::pna(24)}) {
        const MonotoneResult r = delta_tilde(map);
        EXPECT_NEAR(r.value, 2.0, 1e-2) << map.name;
        EXPECT_EQ(r.backend, "analytic");
        ASSERT_TRUE(r.argmax_input.has_value());
        if (map.name == "pns") {
            EXPECT_LE(std::abs(r.argmax_input->alpha), 0.05);
        }
        EXPECT_LE(r.stationarity_ascent, 1e-3);
    }
}

TEST(DeltaTilde, IdentityIsZero) {
    EXPECT_NEAR(delta_tilde(maps::identity(16)).value, 0.0, 1e-6);
}

TEST(DeltaTilde, RejectsNonUnitaryMaps) {
    EXPECT_THROW(delta_tilde(maps::bps(16)), UnsupportedMap);
    EXPECT_THROW(delta_tilde(maps::loss(0.5, 16)), UnsupportedMap);
}

TEST(DeltaTilde, KerrBelowEnergyCeiling) {
    MonotoneConfig cfg;
    cfg.energy = 1.0;
    const MonotoneResult r = delta_tilde(maps::kerr(0.5, 24), cfg);
    EXPECT_GT(r.value, 0.5);
    EXPECT_LE(r.value, energy_ceiling(1.0 + r.argmax_input->n_s, 2) + 1e-6);
    EXPECT_EQ(r.backend, "fock");
}

TEST(DgBound, BelowDeltaTilde) {
    for (const auto& map : {maps::pns(24), maps::pna(24)}) {
        const double dg = d_g_bound(map).value;
        EXPECT_LE(dg, delta_tilde(map).value + 1e-3) << map.name;
        EXPECT_GT(dg, 0.5);
    }
}

TEST(DgBound, PhaseFlipAboveClosedForm) {
    InputParams p;
    p.alpha = 2.0;
    const double v = d_g_bound(maps::bps(40), {p}).value;
    EXPECT_GE(v, gaussian::thermal_entropy((std::sqrt(17.0) - 1.0) / 2.0) - 1.0);
}

TEST(DgBound, IdentityAndEmptyInputs) {
    EXPECT_NEAR(d_g_bound(maps::identity(24)).value, 0.0, 1e-4);
    EXPECT_THROW(d_g_bound(maps::pns(24), std::vector<InputParams>{}), InvalidArgument);
}

TEST(DivergenceProfile, SubtractionPlateaus) {
    const DivergenceProfile p = divergence_profile(maps::pns(24), {0.5, 1.0, 2.0, 4.0});
    EXPECT_EQ(p.classification, ProfileClass::finite);
    EXPECT_NEAR(p.plateau, 2.0, 0.05);
}

TEST(DivergenceProfile, GridValidation) {
    EXPECT_THROW(divergence_profile(maps::pns(24), {1.0, 2.0, 4.0}), InvalidArgument);
    EXPECT_THROW(divergence_profile(maps::pns(24), {1.0, 2.0, 2.0, 4.0}), InvalidArgument);
    EXPECT_THROW(divergence_profile(maps::pns(24), {0.0, 1.0, 2.0, 4.0}), InvalidArgument);
}

TEST(DivergenceProfile, SlopeFit) {
    EXPECT_NEAR(log2_slope({1, 2, 4, 8}, {0, 1, 2, 3}), 1.0, 1e-14);
    EXPECT_NEAR(log2_slope({1, 2, 4, 8}, {2, 2, 2, 2}), 0.0, 1e-14);
}

TEST(MixedUnitaryBounds, Examples) {
    const double s = 2.0 * gaussian::thermal_entropy(1.0);
    const Interval bps = mixed_unitary_bounds({0.5, 0.5}, s);
    EXPECT_NEAR(bps.lo, 3.0, 1e-12);
    EXPECT_NEAR(bps.hi, 4.0, 1e-12);
    const Interval one = mixed_unitary_bounds({1.0}, 1.7);
    EXPECT_EQ(one.lo, 1.7);
    EXPECT_EQ(one.hi, 1.7);
    const Interval four = mixed_unitary_bounds({0.25, 0.25, 0.25, 0.25}, 1.0);
    EXPECT_EQ(four.lo, 0.0);
    EXPECT_EQ(four.hi, 1.0);
    EXPECT_THROW(mixed_unitary_bounds({0.5, 0.6}, 1.0), InvalidArgument);
    EXPECT_THROW(mixed_unitary_bounds({}, 1.0), InvalidArgument);
}

TEST(GdUpperBound, EnvironmentFockStates) {
    const auto bs = gaussian::beamsplitter(2, 0, 1, 0.5);
    const GdBound vac = gd_upper_bound(maps::gaussian_dilatable(bs, fock::StateSpec::fock_n(0), 24), 4);
    EXPECT_NEAR(vac.bound, 0.0, 1e-9);
    EXPECT_LE(vac.sampled_max, 1e-3);
    const GdBound one = gd_upper_bound(maps::gaussian_dilatable(bs, fock::StateSpec::fock_n(1), 24), 4);
    EXPECT_NEAR(one.bound, 2.0, 1e-6);
    EXPECT_TRUE(one.satisfied);
    // |2> gaussifies to a thermal state with two photons.
    const GdBound two = gd_upper_bound(maps::gaussian_dilatable(bs, fock::StateSpec::fock_n(2), 24), 4);
    EXPECT_NEAR(two.bound, gaussian::thermal_entropy(2.0), 1e-6);
    EXPECT_TRUE(two.satisfied);
    EXPECT_THROW(gd_upper_bound(maps::pns(24)), InvalidArgument);
}

TEST(EnergyCeiling, ClosedForm) {
    EXPECT_NEAR(energy_ceiling(2.0, 2), 2.0 * gaussian::thermal_entropy(1.0), 1e-14);
    EXPECT_EQ(energy_ceiling(0.0, 1), 0.0);
}
