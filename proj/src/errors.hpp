#pragma once

#include <stdexcept>
#include <string>

namespace bqw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic outside the field: division by zero, square root of a negative.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A geometric or combinatorial precondition of a constructor does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bqw
