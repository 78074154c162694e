#pragma once

#include <stdexcept>

namespace fivenum {

// Raised when a computation cannot produce a trustworthy number
// (quadrature that does not converge, a variance ratio with a
// non-positive denominator, a radicand that is genuinely negative).
// Contract violations use std::invalid_argument / std::domain_error.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fivenum
