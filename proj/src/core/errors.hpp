#pragma once

#include <stdexcept>
#include <string>

namespace vrada {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Vector/matrix length does not match the problem dimension.
struct ShapeError : Error {
  using Error::Error;
};

// Component or class index out of range.
struct IndexError : Error {
  using Error::Error;
};

// NaN/Inf produced where a finite value is required.
struct NumericError : Error {
  using Error::Error;
};

// Malformed input text; carries a 1-based line number when known.
struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int line_no)
      : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A runtime check of a convergence guarantee failed.
struct AuditError : Error {
  using Error::Error;
};

// Inconsistent solver/experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Grid search ended with no usable candidate.
struct TuningError : Error {
  using Error::Error;
};

// The two reference solvers disagree beyond tolerance.
struct ReferenceError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace vrada
