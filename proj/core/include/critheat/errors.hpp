#pragma once

#include <stdexcept>
#include <string>

namespace critheat {

// Argument outside the mathematical domain of a function (e.g. negative radius).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters that violate a documented precondition or construction rule.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation requested outside a tabulated range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A user-supplied callback broke its declared contract (e.g. a rate above its envelope).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace critheat
