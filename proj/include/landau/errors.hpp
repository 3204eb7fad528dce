#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace landau {

/// Invalid run configuration or argument outside the soft-potential range.
class ConfigError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature or another numerical procedure missed its tolerance.
class NumericalToleranceError : public std::runtime_error
{
 public:
  NumericalToleranceError(const std::string& what, double achieved, double target)
      : std::runtime_error(what + " (achieved " + sci(achieved) + ", target " + sci(target) + ")")
      , achieved_(achieved)
      , target_(target)
  {
  }
  double achieved() const { return achieved_; }
  static std::string sci(double x)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
  }

  double target() const { return target_; }

 private:
  double achieved_;
  double target_;
};

/// Requested degree exceeds what a basis or quadrature rule can represent.
class CapacityError : public std::length_error
{
 public:
  using std::length_error::length_error;
};

/// A typed invariant (symmetry, PSD, table range) failed to hold.
class InvariantViolation : public std::logic_error
{
 public:
  using std::logic_error::logic_error;
};

/// A fit or statistic was requested on too few usable points.
class InsufficientDataError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// a_jk evaluated at its singular point (v = 0 with γ ≤ −2).
class SingularKernelError : public std::domain_error
{
 public:
  using std::domain_error::domain_error;
};

}  // namespace landau
