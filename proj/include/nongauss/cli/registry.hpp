#pragma once

// Name-based construction of states and maps for the command line.
//
//   states: fock:n  coherent:re[,im]  thermal:N  tmsv:NS  cat:alpha
//   maps:   pns  pna  bps  kerr[:gamma]  talpha:alpha  gd:bs<tau>,env=<state>  id

#include "nongauss/errors.hpp"
#include "nongauss/fock/states.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/maps.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace nongauss::cli {

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

inline constexpr double kDefaultKerrGamma = 0.5;

namespace detail {

inline double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw UsageError("invalid number '" + std::string(s) + "' in " + std::string(what));
    return v;
}

inline int parse_int(std::string_view s, std::string_view what) {
    int v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) throw UsageError("invalid integer '" + std::string(s) + "' in " + std::string(what));
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

}  // namespace detail

/// Parses a state spec. The short forms fock1, coherent0.5 are accepted too,
/// since they read naturally inside map specs (env=fock1).
inline fock::StateSpec parse_state_spec(std::string_view spec) {
    std::string_view kind = spec;
    std::string_view args;
    if (const auto c = spec.find(':'); c != std::string_view::npos) {
        kind = spec.substr(0, c);
        args = spec.substr(c + 1);
    } else {
        const auto digit = spec.find_first_of("0123456789-.");
        if (digit != std::string_view::npos) {
            kind = spec.substr(0, digit);
            args = spec.substr(digit);
        }
    }
    if (args.empty()) throw UsageError("state spec '" + std::string(spec) + "' needs a parameter");
    if (kind == "fock") {
        const int n = detail::parse_int(args, spec);
        if (n < 0) throw UsageError("fock: photon number must be >= 0");
        return fock::StateSpec::fock_n(n);
    }
    if (kind == "coherent") {
        const auto parts = detail::split(args, ',');
        if (parts.size() > 2) throw UsageError("coherent: expected re[,im]");
        const double re = detail::parse_number(parts[0], spec);
        const double im = parts.size() == 2 ? detail::parse_number(parts[1], spec) : 0.0;
        return fock::StateSpec::coherent({re, im});
    }
    if (kind == "thermal" || kind == "tmsv") {
        const double n = detail::parse_number(args, spec);
        if (n < 0.0) throw UsageError(std::string(kind) + ": mean photon number must be >= 0");
        return kind == "thermal" ? fock::StateSpec::thermal(n) : fock::StateSpec::tmsv(n);
    }
    if (kind == "cat") return fock::StateSpec::cat(detail::parse_number(args, spec));
    throw UsageError("unknown state '" + std::string(spec) + "'");
}

/// Parses a map spec at Fock cutoff d.
inline maps::MapDescriptor parse_map_spec(std::string_view spec, int d) {
    if (spec == "pns") return maps::pns(d);
    if (spec == "pna") return maps::pna(d);
    if (spec == "bps") return maps::bps(d);
    if (spec == "id") return maps::identity(d);
    if (spec == "kerr") return maps::kerr(kDefaultKerrGamma, d);
    if (detail::starts_with(spec, "kerr:")) return maps::kerr(detail::parse_number(spec.substr(5), spec), d);
    for (std::string_view prefix : {"talpha:", "tα:"})
        if (detail::starts_with(spec, prefix)) {
            const auto parts = detail::split(spec.substr(prefix.size()), ',');
            if (parts.size() > 2) throw UsageError("talpha: expected re[,im]");
            const double re = detail::parse_number(parts[0], spec);
            const double im = parts.size() == 2 ? detail::parse_number(parts[1], spec) : 0.0;
            return maps::coherent_projector({re, im}, d);
        }
    if (detail::starts_with(spec, "gd:")) {
        const std::string_view body = spec.substr(3);
        const auto comma = body.find(",env=");
        if (comma == std::string_view::npos || !detail::starts_with(body, "bs"))
            throw UsageError("gd: expected gd:bs<tau>,env=<state>");
        const double tau = detail::parse_number(body.substr(2, comma - 2), spec);
        if (!(tau >= 0.0 && tau <= 1.0)) throw UsageError("gd: transmissivity must lie in [0, 1]");
        const fock::StateSpec env = parse_state_spec(body.substr(comma + 5));
        if (env.kind == fock::StateKind::thermal || env.kind == fock::StateKind::tmsv)
            throw UsageError("gd: environment must be a pure single-mode state");
        maps::MapDescriptor m = maps::gaussian_dilatable(gaussian::beamsplitter(2, 0, 1, tau), env, d, std::string(spec));
        m.metadata["tau"] = tau;
        if (env.kind == fock::StateKind::fock) m.phase_covariant = true;
        return m;
    }
    throw UsageError("unknown map '" + std::string(spec) + "'");
}

}  // namespace nongauss::cli
