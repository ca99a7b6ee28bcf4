#pragma once

#include <stdexcept>
#include <string>

namespace famd {

// Base for everything the library throws on bad input or numerical trouble.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or arguments (CLI exit code 1).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Violated preconditions on data or configuration (CLI exit code 1).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Non-finite values, degenerate weights, infeasible SVD requests (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace famd
