#pragma once

#include <stdexcept>
#include <string>

namespace boxlab {

// Raised when an iterative or quadrature computation cannot reach its
// stated tolerance (unsupported tail, bracket failure, degenerate query).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace boxlab
