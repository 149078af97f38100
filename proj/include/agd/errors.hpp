#pragma once

#include <stdexcept>
#include <string>

namespace agd {

// Usage errors (bad shapes, bad input files, out-of-order calls) are thrown.
// Mathematical failures are never exceptions; they land in a Report.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed expression or model text. Positions are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(column_)),
        line(line_), column(column_) {}
};

// Reference to an identifier that is not declared.
struct UnknownNameError : Error {
  using Error::Error;
};

// Division by a syntactically zero polynomial.
struct DivisionByZeroError : Error {
  using Error::Error;
};

// Mismatched patches, bundles or tensor shapes.
struct ShapeError : Error {
  using Error::Error;
};

// A check was invoked before the checks it depends on passed.
struct PreconditionError : Error {
  using Error::Error;
};

} // namespace agd
