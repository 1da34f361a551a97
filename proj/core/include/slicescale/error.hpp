#pragma once

#include <stdexcept>
#include <string>

namespace slicescale {

// Base of every error raised by the library. Validation failures (bad
// dimensions, incompatible targets, malformed input) use this type directly.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Overflow, non-finite values, or a solver that did not reach the
// requested accuracy.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace slicescale
