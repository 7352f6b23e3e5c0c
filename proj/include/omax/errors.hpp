#pragma once

#include <stdexcept>
#include <string>

namespace omax {

/// Caller handed us something outside an operation's preconditions.
struct invalid_input : std::invalid_argument {
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// A matrix required to be positive semidefinite has an eigenvalue below -psd_tol.
struct not_psd_error : std::runtime_error {
    explicit not_psd_error(const std::string& what) : std::runtime_error(what) {}
};

/// A geometric counterexample construction could not be completed.
struct construction_failure : std::runtime_error {
    explicit construction_failure(const std::string& what) : std::runtime_error(what) {}
};

/// An internally produced certificate failed its own verification.
struct internal_inconsistency : std::runtime_error {
    explicit internal_inconsistency(const std::string& what) : std::runtime_error(what) {}
};

} // namespace omax
