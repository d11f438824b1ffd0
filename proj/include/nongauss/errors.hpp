#pragma once

#include <stdexcept>
#include <string>

namespace nongauss {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A state (or matrix posing as one) violates a physicality invariant.
class InvalidState : public Error {
public:
    using Error::Error;
};

/// Fock truncation lost more probability than the configured bound allows.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int suggested_cutoff)
        : Error(what), suggested_cutoff_(suggested_cutoff) {}

    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    int suggested_cutoff_;
};

/// A post-selected map was applied to an input it annihilates.
class ZeroProbabilityBranch : public Error {
public:
    using Error::Error;
};

/// The requested evaluation is not defined for this kind of map.
class UnsupportedMap : public Error {
public:
    using Error::Error;
};

}  // namespace nongauss
