#pragma once

// Gaussian moment factoring over the two-mode squeezed vacuum, and the
// closed-form output moments of photon subtraction/addition applied to the
// input family D_alpha R_theta S_r |zeta> on mode B.

#include "nongauss/errors.hpp"
#include "nongauss/fock/moments.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/linalg.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace nongauss::monotone {

/// a_A, a_A^dag, a_B or a_B^dag. Mode 0 is the ancilla A, mode 1 is B.
struct Ladder {
    int mode = 0;
    bool dagger = false;

    auto operator<=>(const Ladder&) const = default;
};

inline Ladder parse_ladder(const std::string& s) {
    static const std::map<std::string, Ladder> table{
        {"aA", {0, false}}, {"aA+", {0, true}}, {"aB", {1, false}}, {"aB+", {1, true}},
        {"a_A", {0, false}}, {"a_A^dag", {0, true}}, {"a_B", {1, false}}, {"a_B^dag", {1, true}},
    };
    const auto it = table.find(s);
    if (it == table.end()) throw InvalidArgument("unsupported ladder symbol '" + s + "'");
    return it->second;
}

/// <x y> over the TMSV with N_S photons per mode, in the given order.
inline Complex tmsv_contraction(Ladder x, Ladder y, double n_s) {
    if (x.mode == y.mode) {
        if (x.dagger && !y.dagger) return n_s;
        if (!x.dagger && y.dagger) return n_s + 1.0;
        return 0.0;
    }
    if (x.dagger == y.dagger) return std::sqrt(n_s * (n_s + 1.0));
    return 0.0;
}

namespace detail {

inline Complex wick(const std::vector<Ladder>& word, std::vector<bool>& used, double n_s) {
    std::size_t first = 0;
    while (first < word.size() && used[first]) ++first;
    if (first == word.size()) return 1.0;
    used[first] = true;
    Complex total = 0.0;
    for (std::size_t j = first + 1; j < word.size(); ++j) {
        if (used[j]) continue;
        const Complex c = tmsv_contraction(word[first], word[j], n_s);
        if (c == Complex(0.0)) continue;
        used[j] = true;
        total += c * wick(word, used, n_s);
        used[j] = false;
    }
    used[first] = false;
    return total;
}

}  // namespace detail

/// Expectation of an ordered ladder word over the TMSV, by summing all
/// order-preserving pair contractions.
inline Complex tmsv_wick_expectation(const std::vector<Ladder>& word, double n_s) {
    if (!(n_s >= 0.0)) throw InvalidArgument("tmsv_wick_expectation: N_S must be >= 0");
    for (const auto& l : word)
        if (l.mode < 0 || l.mode > 1) throw InvalidArgument("tmsv_wick_expectation: unsupported mode label");
    if (word.size() % 2 == 1) return 0.0;
    std::vector<bool> used(word.size(), false);
    return detail::wick(word, used, n_s);
}

inline Complex tmsv_wick_expectation(const std::vector<std::string>& word, double n_s) {
    std::vector<Ladder> w;
    for (const auto& s : word) w.push_back(parse_ladder(s));
    return tmsv_wick_expectation(w, n_s);
}

/// Polynomial in ladder operators: ordered words with complex coefficients.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(Complex c) {
        Polynomial p;
        p.terms_[{}] = c;
        return p;
    }
    static Polynomial symbol(Ladder l, Complex c = 1.0) {
        Polynomial p;
        p.terms_[{l}] = c;
        return p;
    }
    /// c0 + u * a_m + v * a_m^dag.
    static Polynomial linear(int mode, Complex c0, Complex u, Complex v) {
        Polynomial p = constant(c0);
        p.terms_[{Ladder{mode, false}}] += u;
        p.terms_[{Ladder{mode, true}}] += v;
        return p;
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial p = *this;
        for (const auto& [w, c] : o.terms_) p.terms_[w] += c;
        return p;
    }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial p;
        for (const auto& [w1, c1] : terms_)
            for (const auto& [w2, c2] : o.terms_) {
                std::vector<Ladder> w = w1;
                w.insert(w.end(), w2.begin(), w2.end());
                p.terms_[w] += c1 * c2;
            }
        return p;
    }

    Polynomial adjoint() const {
        Polynomial p;
        for (const auto& [w, c] : terms_) {
            std::vector<Ladder> r(w.rbegin(), w.rend());
            for (auto& l : r) l.dagger = !l.dagger;
            p.terms_[r] += std::conj(c);
        }
        return p;
    }

    Complex tmsv_expectation(double n_s) const {
        Complex s = 0.0;
        for (const auto& [w, c] : terms_)
            if (c != Complex(0.0)) s += c * tmsv_wick_expectation(w, n_s);
        return s;
    }

    std::size_t max_word_length() const {
        std::size_t m = 0;
        for (const auto& kv : terms_) m = std::max(m, kv.first.size());
        return m;
    }

private:
    std::map<std::vector<Ladder>, Complex> terms_;
};

/// Parameters of |psi> = D_alpha R_theta S_r |zeta> with D, R, S on mode B.
struct InputParams {
    Complex alpha{};
    double theta = 0.0;
    double r = 0.0;
    double n_s = 0.0;

    void validate() const {
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(theta) ||
            !std::isfinite(r) || !std::isfinite(n_s))
            throw InvalidArgument("InputParams: non-finite parameter");
        if (n_s < 0.0) throw InvalidArgument("InputParams: N_S must be >= 0");
    }

    /// Mean photon number entering the map on mode B.
    double input_energy() const {
        return std::norm(alpha) + ((2.0 * n_s + 1.0) * std::cosh(2.0 * r) - 1.0) / 2.0;
    }
};

enum class Conditioning { subtraction, addition };

struct AnalyticOutput {
    gaussian::GaussianState state;
    fock::MomentRecord moments;
    double norm_squared = 0.0;  // <K^dag K> before normalization
};

/// Moments of xi = N K (D R S)|zeta>, where K = a_B (subtraction) or a_B^dag
/// (addition), expanded through (D R S)^dag a_B (D R S) = alpha + u a_B + v a_B^dag
/// with u = e^{-i theta} cosh r, v = -e^{-i theta} sinh r, and factored by Wick's theorem.
inline AnalyticOutput analytic_output(const InputParams& p, Conditioning which) {
    p.validate();
    const Complex phase = std::exp(Complex(0.0, -p.theta));
    const Complex u = phase * std::cosh(p.r);
    const Complex v = -phase * std::sinh(p.r);
    const Polynomial b = Polynomial::linear(1, p.alpha, u, v);  // image of a_B
    const Polynomial bd = b.adjoint();
    const Polynomial a = Polynomial::symbol({0, false});
    const Polynomial ad = Polynomial::symbol({0, true});
    const Polynomial k = which == Conditioning::subtraction ? b : bd;
    const Polynomial kd = k.adjoint();

    auto expect = [&](const Polynomial& x) { return (kd * x * k).tmsv_expectation(p.n_s); };
    const double norm2 = expect(Polynomial::constant(1.0)).real();
    if (norm2 <= 1e-14) throw ZeroProbabilityBranch("analytic_output: the map annihilates this input");

    fock::MomentRecord m = fock::MomentRecord::empty(2);
    const std::array<Polynomial, 2> lo{a, b};
    const std::array<Polynomial, 2> hi{ad, bd};
    for (int j = 0; j < 2; ++j) {
        m.a(j) = expect(lo[j]) / norm2;
        m.a2(j) = expect(lo[j] * lo[j]) / norm2;
        m.n(j) = expect(hi[j] * lo[j]) / norm2;
    }
    m.aa(0, 1) = expect(a * b) / norm2;
    m.adag_a(0, 1) = expect(ad * b) / norm2;
    return {fock::covariance_from_moments(m), m, norm2};
}

inline gaussian::GaussianState analytic_output_covariance(const InputParams& p, Conditioning which) {
    return analytic_output(p, which).state;
}

/// delta_G of the (pure) output, i.e. the entropy of its Gaussification.
inline double analytic_delta(const InputParams& p, Conditioning which) {
    return gaussian::gaussian_entropy(analytic_output_covariance(p, which), 1e-7);
}

}  // namespace nongauss::monotone
