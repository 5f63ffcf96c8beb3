#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snmgeo {

// Raised by the expression parser; `offset` is the byte position in the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation outside the real domain of an expression or operation,
// or a result that overflowed to a non-finite value.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation exactly at a singular endpoint of a profile domain.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Invalid parameters for a constrained constructor (cylinder families,
// plane sections, grid specs).
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace snmgeo
