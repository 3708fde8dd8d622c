#pragma once

#include <stdexcept>
#include <string>

namespace qcurv {

// Grid numerics run in extended precision: fourth-order stencils on fine
// grids amplify data roundoff by roughly 1/h^4.
using real = long double;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class StencilError : public Error {
 public:
  using Error::Error;
};
class WindowError : public Error {
 public:
  using Error::Error;
};
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};
class DegenerateOperatorError : public Error {
 public:
  using Error::Error;
};
class IllConditionedFit : public Error {
 public:
  using Error::Error;
};
class SignalToNoiseError : public Error {
 public:
  using Error::Error;
};
class PreconditionError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Dimension {
  int n;
  explicit Dimension(int n_) : n(n_) {
    if (n < 4) throw DimensionError("dimension must be >= 4 (got " + std::to_string(n) + ")");
  }
};

}  // namespace qcurv
