#pragma once

#include <stdexcept>
#include <string>

namespace asqlab {

// Base class so callers can catch everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid space parameters, search configuration, or mode restrictions.
// CLI maps this to exit code 2.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed or out-of-range input data (vectors, CSV, JSON payloads).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// A construction needs a larger truncation than the space provides.
// required_m is an estimate of a sufficient truncation (may be inf
// when it exceeds the representable range).
struct TruncationError : Error {
    double required_m;
    TruncationError(const std::string& msg, double required) : Error(msg), required_m(required) {}
};

// The enumeration oracle refuses to visit more functionals than the cap.
struct CapError : Error {
    double requested;
    double cap;
    CapError(const std::string& msg, double requested_, double cap_)
        : Error(msg), requested(requested_), cap(cap_) {}
};

// A proven property failed to hold numerically; indicates a bug.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

} // namespace asqlab
