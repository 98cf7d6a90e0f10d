#pragma once

#include <stdexcept>

namespace risfso {

// Malformed input: violated precondition or invalid configuration.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric evaluation failure: pole hit, rejected series, stalled quadrature.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace risfso
