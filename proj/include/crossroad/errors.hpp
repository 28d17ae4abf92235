#pragma once

#include <stdexcept>
#include <string>

namespace crossroad {

// Two nodes (or a node and an interferer) share a position; path loss is
// unbounded there.
class SingularDistanceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid parameters: out-of-range probabilities, alpha <= 1, ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature did not reach the requested tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crossroad
