#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace maxbias {

/// Thrown when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative method failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracket does not contain a sign change.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iter = 200;

  /// Throws DomainError unless all fields are positive.
  void validate() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using RealFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]; either
/// end may be infinite. max_iter bounds the number of panel bisections.
/// The result is accepted when the error estimate is below
/// max(abs_tol, rel_tol * L1 norm).
double integrate(const RealFn& f, double a, double b, const Tolerance& tol = {});

/// Same, over consecutive panels [breaks[i], breaks[i+1]] sharing one global
/// error budget. Breakpoints must be finite and strictly increasing.
double integrate_pieces(const RealFn& f, std::span<const double> breaks, const Tolerance& tol = {});

/// Bracketing root finder (TOMS 748 with bisection safeguard).
/// Requires f(lo) * f(hi) <= 0.
double find_root(const RealFn& f, double lo, double hi, const Tolerance& tol = {});

struct Extremum {
  double x;
  double value;
};

/// Maximizer of a unimodal f on [lo, hi] (Brent's parabolic/golden search).
/// A constant function yields the midpoint.
Extremum maximize_unimodal(const RealFn& f, double lo, double hi, const Tolerance& tol = {});

}  // namespace maxbias
