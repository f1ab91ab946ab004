#pragma once

#include <stdexcept>
#include <string>

namespace ferulam {

/// Input or configuration rejected before any computation started.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Velocity/energy at or below the solvable threshold v* (resp. v*^2/2).
class BelowThresholdError : public std::domain_error {
public:
    explicit BelowThresholdError(const std::string& what) : std::domain_error(what) {}
};

/// Root finder failed to meet its residual tolerance. Unreachable when the
/// caller honors the v* precondition; reaching it signals a contract violation.
class NoConvergenceError : public std::runtime_error {
public:
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// The non-injectivity construction violated one of its own requirements.
class ConstructionFailedError : public std::logic_error {
public:
    explicit ConstructionFailedError(const std::string& what) : std::logic_error(what) {}
};

} // namespace ferulam
