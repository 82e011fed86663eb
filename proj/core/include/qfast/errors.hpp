#pragma once

#include <stdexcept>
#include <string>

namespace qfast {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An evaluator declined to produce a value at the requested magnitude.
/// Orbits catch this and stop with status "range-truncated".
class EvaluatorRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on operation parameters does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qfast
