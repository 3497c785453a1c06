#pragma once

#include <stdexcept>
#include <string>

namespace pairstream {

// Bad or inconsistent configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameters outside the model's validity domain: phi or R*tau bounds,
// unstable rates, thermal-weight overflow (CLI exit code 3).
class ValidityError : public std::runtime_error {
  public:
    explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Oracle failed to reach a trustworthy steady state (CLI exit code 4).
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Photon population escaped the truncated Fock space.
class TruncationError : public ConvergenceError {
  public:
    explicit TruncationError(const std::string& msg) : ConvergenceError(msg) {}
};

// Internal consistency check failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
  public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace pairstream
