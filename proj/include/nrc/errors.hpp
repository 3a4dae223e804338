#pragma once

#include <stdexcept>
#include <string>

namespace nrc {

/// Input failed a module-level precondition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Request exceeds a configured memory/size cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A state invariant broke mid-computation (numerical corruption).
class CorruptedStateError : public std::runtime_error {
 public:
  explicit CorruptedStateError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace nrc
