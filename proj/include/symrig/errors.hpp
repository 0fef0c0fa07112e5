#pragma once

#include <stdexcept>
#include <string>

namespace symrig {

/// Raised when an input violates a documented precondition: malformed data,
/// an invalid vertex-to-vertex map, an incompatible configuration, and so on.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a numerical consistency check fails: a residual exceeds its
/// bound, a multiplicity is not integral, or the float path disagrees with
/// the exact-rational path.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace symrig
