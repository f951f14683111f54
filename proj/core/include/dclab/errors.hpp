#pragma once

#include <stdexcept>
#include <string>

namespace dclab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LatticeMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// A shift path left the index lattice (unilateral underflow).
class PathExitsLattice : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// Raised when a value loaded or constructed breaks a domain invariant.
// `field` names the offending location, e.g. "op.weights.nonneg".
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dclab
