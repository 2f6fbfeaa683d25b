#ifndef MATMI_ERRORS_HPP
#define MATMI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace matmi {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: unknown phantom name, invalid mesh size, mesh mismatch, ...
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// A coefficient field violates its admissibility bounds.
class CoefficientBoundError : public Error {
 public:
  CoefficientBoundError(const std::string& msg, int node)
      : Error(msg + " (node " + std::to_string(node) + ")"), node_index(node) {}
  int node_index;
};

// Linear solver failed to reach the requested tolerance.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Transport problem is singular (no inflow data and no diffusion, or v == 0).
class DegenerateTransportError : public SolverError {
 public:
  explicit DegenerateTransportError(const std::string& msg) : SolverError(msg) {}
};

// File format / serialization problems.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace matmi

#endif
