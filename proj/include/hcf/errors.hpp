#pragma once

#include <stdexcept>
#include <string>

namespace hcf {

// Base of every library error. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape, order or center mismatch; missing derivative data.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Division by a jet whose constant term is (numerically) zero.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Metric fails the positive-definiteness floor.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

// Point outside the chart domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (non-PSD block, pair not a zero, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Unknown metric, bad parameter, malformed config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Ansatz RHS left the span of the family.
class AnsatzEscapeError : public Error {
 public:
  using Error::Error;
};

// Positivity floor violated during time stepping.
class BlowupError : public Error {
 public:
  using Error::Error;
};

// Frame evaluation failed along a transport curve.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcf
