#pragma once

// Conditional quantum maps phi(rho) = T(rho) / Tr T(rho) in Fock space.
// Every Kraus operator is a single-mode matrix acting on one target mode;
// a 1 x D operator (a bra) consumes its mode.

#include "nongauss/errors.hpp"
#include "nongauss/fock/array.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace nongauss::fock {

inline constexpr double kZeroProbability = 1e-14;

struct UnitaryBody {
    CMat u;
};
struct KrausBody {
    std::vector<CMat> ops;
};
struct MixtureBody {
    std::vector<double> probabilities;
    std::vector<CMat> unitaries;
};
using MapBody = std::variant<UnitaryBody, KrausBody, MixtureBody>;

class ConditionalMap {
public:
    ConditionalMap() = default;

    /// `edge_gain` scales the top-level population of the input into an
    /// estimate of the weight pushed out of the truncated box.
    ConditionalMap(int n_in, int n_out, int cutoff, MapBody body, bool renormalize, double edge_gain = 1.0)
        : n_in_(n_in), n_out_(n_out), cutoff_(cutoff), body_(std::move(body)), renormalize_(renormalize),
          edge_gain_(edge_gain) {
        if (n_in < 1 || n_out < 1) throw InvalidArgument("ConditionalMap: mode counts must be >= 1");
        if (cutoff < 2) throw InvalidArgument("ConditionalMap: cutoff must be >= 2");
        kraus_ = build_kraus();
        if (kraus_.empty()) throw InvalidArgument("ConditionalMap: Kraus list is empty");
        const auto rows = kraus_.front().rows();
        for (const auto& k : kraus_) {
            if (k.cols() != cutoff || k.rows() != rows)
                throw InvalidArgument("ConditionalMap: Kraus operators must share a D_out x D shape");
        }
        if (rows != cutoff && rows != 1) throw InvalidArgument("ConditionalMap: output dimension must be D or 1");
    }

    int n_in() const { return n_in_; }
    int n_out() const { return n_out_; }
    int cutoff() const { return cutoff_; }
    bool renormalize() const { return renormalize_; }
    double edge_gain() const { return edge_gain_; }
    const MapBody& body() const { return body_; }
    const std::vector<CMat>& kraus() const { return kraus_; }
    bool consumes_mode() const { return kraus_.front().rows() == 1; }
    bool is_single_kraus() const { return kraus_.size() == 1; }

private:
    std::vector<CMat> build_kraus() const {
        if (const auto* u = std::get_if<UnitaryBody>(&body_)) return {u->u};
        if (const auto* k = std::get_if<KrausBody>(&body_)) return k->ops;
        const auto& m = std::get<MixtureBody>(body_);
        if (m.probabilities.size() != m.unitaries.size() || m.unitaries.empty())
            throw InvalidArgument("ConditionalMap: mixture needs one probability per unitary");
        double total = 0.0;
        for (double p : m.probabilities) {
            if (!(p >= 0.0)) throw InvalidArgument("ConditionalMap: negative mixture probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("ConditionalMap: mixture probabilities must sum to 1");
        std::vector<CMat> ops;
        for (std::size_t k = 0; k < m.unitaries.size(); ++k) ops.push_back(std::sqrt(m.probabilities[k]) * m.unitaries[k]);
        return ops;
    }

    int n_in_ = 1;
    int n_out_ = 1;
    int cutoff_ = 2;
    MapBody body_;
    bool renormalize_ = true;
    double edge_gain_ = 1.0;
    std::vector<CMat> kraus_;
};

struct MapOutput {
    FockArray state;
    double success_probability = 1.0;
};

struct EnsembleOutput {
    Ensemble state;
    double success_probability = 1.0;
};

namespace detail {

inline int resolve_target(const ConditionalMap& map, int n_modes, int target) {
    if (target < 0) target = n_modes - 1;
    if (target >= n_modes) throw InvalidArgument("apply_map: target mode out of range");
    if (map.n_in() > n_modes) throw InvalidArgument("apply_map: state has fewer modes than the map expects");
    if (map.consumes_mode() && n_modes < 2) throw InvalidArgument("apply_map: cannot consume the only mode");
    return target;
}

inline double truncation_loss(const ConditionalMap& map, double edge_pop, double prob, double tr_loss) {
    if (!map.renormalize()) return std::max(0.0, tr_loss);
    return map.edge_gain() * edge_pop / prob;
}

}  // namespace detail

/// Applies the map to `target` (default: last mode), identity elsewhere.
inline MapOutput apply_map(const FockArray& rho, const ConditionalMap& map, int target = -1) {
    if (rho.cutoff() != map.cutoff()) throw InvalidArgument("apply_map: cutoff mismatch");
    const int n = rho.n_modes();
    target = detail::resolve_target(map, n, target);
    const int n_out = map.consumes_mode() ? n - 1 : n;
    const int d = rho.cutoff();
    const double edge = map.edge_gain() > 0.0 ? edge_population(rho, target) : 0.0;

    if (rho.is_ket() && map.is_single_kraus()) {
        const CVec out = apply_local(rho.ket_data(), n, d, target, map.kraus().front());
        const double prob = out.squaredNorm();
        if (prob <= kZeroProbability) throw ZeroProbabilityBranch("apply_map: zero success probability");
        const double loss = detail::truncation_loss(map, edge, prob, 1.0 - prob);
        return {FockArray::ket_normalized(out / std::sqrt(prob), n_out, d, rho.trace_deficit() + loss, rho.trace_tol()),
                prob};
    }
    const CMat in = rho.to_density().density_data();
    const long dim_out = ipow(d, n_out);
    CMat out = CMat::Zero(dim_out, dim_out);
    for (const auto& k : map.kraus()) out += conjugate_local(in, n, d, target, k);
    out = 0.5 * (out + out.adjoint());
    const double prob = out.trace().real();
    if (prob <= kZeroProbability) throw ZeroProbabilityBranch("apply_map: zero success probability");
    const double loss = detail::truncation_loss(map, edge, prob, 1.0 - prob);
    return {FockArray::density(out / prob, n_out, d, rho.trace_deficit() + loss, rho.trace_tol()), prob};
}

/// Branch-wise application; the output ensemble has one branch per
/// (input branch, Kraus operator) pair with non-negligible weight.
inline EnsembleOutput apply_map(const Ensemble& e, const ConditionalMap& map, int target = -1,
                                double trace_tol = kDefaultTraceTol) {
    if (e.cutoff != map.cutoff()) throw InvalidArgument("apply_map: cutoff mismatch");
    const int n = e.n_modes;
    target = detail::resolve_target(map, n, target);
    const int d = e.cutoff;
    Ensemble out;
    out.n_modes = map.consumes_mode() ? n - 1 : n;
    out.cutoff = d;
    double edge = 0.0;
    CMat x(e.branches.front().size(), static_cast<Eigen::Index>(e.branches.size()));
    for (std::size_t i = 0; i < e.branches.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = e.branches[i];
    if (map.edge_gain() > 0.0) {
        const long inner = ipow(d, n - 1 - target);
        const long outer = ipow(d, target);
        for (Eigen::Index c = 0; c < x.cols(); ++c)
            for (long o = 0; o < outer; ++o)
                edge += x.col(c).segment(o * d * inner + (d - 1) * inner, inner).squaredNorm();
    }
    double prob = 0.0;
    for (const auto& k : map.kraus()) {
        const CMat y = apply_local(x, n, d, target, k);
        for (Eigen::Index c = 0; c < y.cols(); ++c) {
            const double w = y.col(c).squaredNorm();
            prob += w;
            if (w > 1e-300) out.branches.push_back(y.col(c));
        }
    }
    if (prob <= kZeroProbability) throw ZeroProbabilityBranch("apply_map: zero success probability");
    for (auto& b : out.branches) b /= std::sqrt(prob);
    const double loss = detail::truncation_loss(map, edge, prob, 1.0 - prob);
    out.trace_deficit = e.trace_deficit + loss;
    if (out.trace_deficit > trace_tol)
        throw TruncationError("apply_map: truncation deficit " + std::to_string(out.trace_deficit),
                              suggest_cutoff(d, out.trace_deficit, trace_tol));
    return {std::move(out), prob};
}

}  // namespace nongauss::fock
