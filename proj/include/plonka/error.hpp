#pragma once

#include <stdexcept>
#include <string>

namespace plonka {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain/codomain mismatch when composing maps or polynomial morphisms.
class CompositionError : public Error {
 public:
  using Error::Error;
};

// An instance needs an arity or size beyond the configured caps. Callers treat
// the instance as outside the checked fragment; it is never a law violation.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class OperadError : public Error {
 public:
  using Error::Error;
};

class AlgebraError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace plonka
