#pragma once

// Catalog of conditional maps: photon subtraction and addition, the random
// phase-flip (BPS) channel, Kerr unitaries, coherent-state projection and
// Gaussian-dilatable channels.

#include "nongauss/errors.hpp"
#include "nongauss/fock/conditional_map.hpp"
#include "nongauss/fock/operators.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nongauss::maps {

enum class Classification { unknown, finite, diverging };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::finite: return "finite";
        case Classification::diverging: return "diverging";
        case Classification::unknown: break;
    }
    return "unknown";
}

/// Environment of a Gaussian-dilatable channel: a pure single-mode state
/// and the two-mode symplectic acting on (system, environment).
struct Dilation {
    gaussian::SymplecticOp unitary;
    fock::StateSpec env;
};

class MapDescriptor {
public:
    using Builder = std::function<fock::ConditionalMap(int)>;

    std::string name;
    std::map<std::string, double> metadata;
    Classification classification = Classification::unknown;
    bool conditional_unitary = false;  // one-to-one, pure states to pure states
    bool gaussian = false;             // the map itself is a Gaussian unitary
    bool phase_covariant = false;      // commutes with phase rotations
    std::optional<Dilation> dilation;

    MapDescriptor() = default;
    MapDescriptor(std::string n, Builder b, int cutoff) : name(std::move(n)), builder_(std::move(b)) {
        body_ = builder_(cutoff);
    }

    const fock::ConditionalMap& body() const { return body_; }
    int cutoff() const { return body_.cutoff(); }

    /// The same map truncated at another cutoff.
    MapDescriptor at_cutoff(int d) const {
        MapDescriptor m = *this;
        m.body_ = builder_(d);
        return m;
    }

    const Builder& builder() const { return builder_; }

private:
    Builder builder_;
    fock::ConditionalMap body_;
};

inline void require_cutoff(int d, int min) {
    if (d < min) throw InvalidArgument("map cutoff must be >= " + std::to_string(min));
}

inline MapDescriptor pns(int d) {
    require_cutoff(d, 3);
    MapDescriptor m("pns", [](int c) { return fock::ConditionalMap(1, 1, c, fock::KrausBody{{fock::ladder(c)}}, true, 0.0); }, d);
    m.conditional_unitary = true;
    m.phase_covariant = true;
    m.classification = Classification::finite;
    return m;
}

inline MapDescriptor pna(int d) {
    require_cutoff(d, 3);
    MapDescriptor m(
        "pna",
        [](int c) {
            return fock::ConditionalMap(1, 1, c, fock::KrausBody{{fock::ladder(c).adjoint()}}, true,
                                        static_cast<double>(c));
        },
        d);
    m.conditional_unitary = true;
    m.phase_covariant = true;
    m.classification = Classification::finite;
    return m;
}

namespace detail {

inline double pns_radicand(Complex alpha, double r, double n_s, double shift) {
    if (!(n_s >= 0.0)) throw InvalidArgument("normalization: N_S must be >= 0");
    return std::norm(alpha) + ((1.0 + 2.0 * n_s) * std::cosh(2.0 * r) + shift) / 2.0;
}

}  // namespace detail

/// 1 / ||a_B psi|| for the input-family state with parameters (alpha, r, N_S).
inline double normalization_pns(Complex alpha, double r, double n_s) {
    const double q = detail::pns_radicand(alpha, r, n_s, -1.0);
    if (q <= 1e-14) throw ZeroProbabilityBranch("normalization_pns: subtraction annihilates the input");
    return 1.0 / std::sqrt(q);
}

inline double normalization_pna(Complex alpha, double r, double n_s) {
    const double q = detail::pns_radicand(alpha, r, n_s, 1.0);
    if (q <= 1e-14) throw ZeroProbabilityBranch("normalization_pna: nonpositive radicand");
    return 1.0 / std::sqrt(q);
}

/// Identity or a pi phase flip, each with probability 1/2.
inline MapDescriptor bps(int d) {
    require_cutoff(d, 2);
    MapDescriptor m(
        "bps",
        [](int c) {
            return fock::ConditionalMap(1, 1, c,
                                        fock::MixtureBody{{0.5, 0.5}, {CMat::Identity(c, c), fock::rotation_matrix(kPi, c)}},
                                        false, 0.0);
        },
        d);
    m.phase_covariant = true;
    m.classification = Classification::diverging;
    m.metadata["p_identity"] = 0.5;
    m.metadata["p_phase_flip"] = 0.5;
    return m;
}

inline MapDescriptor kerr(double gamma, int d) {
    require_cutoff(d, 2);
    if (!std::isfinite(gamma)) throw InvalidArgument("kerr: gamma must be finite");
    MapDescriptor m(
        "kerr", [gamma](int c) { return fock::ConditionalMap(1, 1, c, fock::UnitaryBody{fock::kerr_matrix(gamma, c)}, true, 0.0); },
        d);
    m.conditional_unitary = true;
    m.phase_covariant = true;
    m.classification = Classification::diverging;
    m.metadata["gamma"] = gamma;
    return m;
}

inline MapDescriptor identity(int d) {
    MapDescriptor m("id", [](int c) { return fock::ConditionalMap(1, 1, c, fock::UnitaryBody{CMat::Identity(c, c)}, true, 0.0); }, d);
    m.conditional_unitary = true;
    m.gaussian = true;
    m.phase_covariant = true;
    m.classification = Classification::finite;
    return m;
}

/// Projects mode A' (mode 1) of a two-mode input on <alpha| and outputs mode A.
inline MapDescriptor coherent_projector(Complex alpha, int d) {
    require_cutoff(d, 2);
    MapDescriptor m(
        "talpha",
        [alpha](int c) {
            // <alpha| restricted to the box, not renormalized.
            CMat bra = fock::detail::coherent_amplitudes(alpha, c).adjoint();
            return fock::ConditionalMap(2, 1, c, fock::KrausBody{{bra}}, true, 0.0);
        },
        d);
    m.metadata["alpha_re"] = alpha.real();
    m.metadata["alpha_im"] = alpha.imag();
    return m;
}

/// Kraus operators K_k = <k|_E U (. (x) |psi_E>) of a channel dilated by a
/// two-mode Gaussian unitary (system = mode 0, environment = mode 1).
inline std::vector<CMat> dilation_kraus(const Dilation& dil, int d) {
    if (dil.unitary.n_modes() != 2) throw InvalidArgument("gaussian_dilatable: dilation must act on two modes");
    const fock::FockArray env = fock::build_state(dil.env, d);
    if (!env.is_ket()) throw InvalidArgument("gaussian_dilatable: environment must be pure");
    const CVec& e = env.ket_data();
    CMat x = CMat::Zero(static_cast<long>(d) * d, d);
    for (int m = 0; m < d; ++m) x.col(m).segment(static_cast<long>(m) * d, d) = e;
    x = fock::symplectic_unitary(dil.unitary, d).apply_columns(std::move(x));
    std::vector<CMat> ops(d, CMat::Zero(d, d));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int m = 0; m < d; ++m) ops[k](i, m) = x(static_cast<long>(i) * d + k, m);
    std::vector<CMat> kept;
    for (auto& k : ops)
        if (k.cwiseAbs().maxCoeff() > 1e-14) kept.push_back(std::move(k));
    return kept;
}

inline MapDescriptor gaussian_dilatable(const gaussian::SymplecticOp& unitary, const fock::StateSpec& env, int d,
                                        std::string name = "gd") {
    require_cutoff(d, 2);
    if (env.kind == fock::StateKind::thermal || env.kind == fock::StateKind::tmsv)
        throw InvalidArgument("gaussian_dilatable: environment must be a pure single-mode state");
    Dilation dil{unitary, env};
    MapDescriptor m(
        std::move(name),
        [dil](int c) { return fock::ConditionalMap(1, 1, c, fock::KrausBody{dilation_kraus(dil, c)}, false, 0.0); }, d);
    m.dilation = dil;
    m.classification = Classification::finite;
    return m;
}

/// Pure-loss channel of transmissivity tau.
inline MapDescriptor loss(double tau, int d) {
    MapDescriptor m = gaussian_dilatable(gaussian::beamsplitter(2, 0, 1, tau), fock::StateSpec::fock_n(0), d, "loss");
    m.metadata["tau"] = tau;
    m.phase_covariant = true;
    return m;
}

/// post o map o pre, with single-mode Gaussian unitaries given as phase-space ops.
inline MapDescriptor compose_gaussian(const MapDescriptor& map, const gaussian::SymplecticOp& pre,
                                      const gaussian::SymplecticOp& post) {
    if (pre.n_modes() != 1 || post.n_modes() != 1) throw InvalidArgument("compose_gaussian: single-mode unitaries expected");
    if (map.body().consumes_mode()) throw InvalidArgument("compose_gaussian: map must preserve its mode");
    const auto inner = map.builder();
    auto builder = [inner, pre, post](int c) {
        const fock::ConditionalMap base = inner(c);
        const CMat u_pre = fock::symplectic_unitary(pre, c).dense();
        const CMat u_post = fock::symplectic_unitary(post, c).dense();
        std::vector<CMat> ops;
        for (const auto& k : base.kraus()) ops.push_back(u_post * k * u_pre);
        return fock::ConditionalMap(base.n_in(), base.n_out(), c, fock::KrausBody{std::move(ops)}, base.renormalize(),
                                    std::max(1.0, base.edge_gain()));
    };
    MapDescriptor m(map.name + "+gaussian", builder, map.cutoff());
    m.conditional_unitary = map.conditional_unitary;
    m.gaussian = map.gaussian;
    m.classification = map.classification;
    m.metadata = map.metadata;
    return m;
}

/// channel o map, where `channel` preserves trace.
inline MapDescriptor then_channel(const MapDescriptor& map, const MapDescriptor& channel) {
    if (channel.body().renormalize()) throw InvalidArgument("then_channel: second map must be a channel");
    const auto first = map.builder();
    const auto second = channel.builder();
    auto builder = [first, second](int c) {
        const fock::ConditionalMap a = first(c);
        const fock::ConditionalMap b = second(c);
        std::vector<CMat> ops;
        for (const auto& l : b.kraus())
            for (const auto& k : a.kraus()) ops.push_back(l * k);
        return fock::ConditionalMap(a.n_in(), a.n_out(), c, fock::KrausBody{std::move(ops)}, a.renormalize(),
                                    a.edge_gain());
    };
    MapDescriptor m(channel.name + "*" + map.name, builder, map.cutoff());
    m.classification = Classification::unknown;
    return m;
}

}  // namespace nongauss::maps
