#pragma once

#include <stdexcept>
#include <string>

namespace cansim {

/// Input data violates the schema or a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax and the like).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A numeric procedure failed: divergence, rank defect, exhausted search
/// budget, or an invariant that should hold by construction did not.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cansim
