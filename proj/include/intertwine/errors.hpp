#pragma once

#include <stdexcept>
#include <string>

namespace intertwine {

class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when an exact enumeration would exceed its size cap.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

class ToleranceFailure : public std::runtime_error {
 public:
  explicit ToleranceFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace intertwine
