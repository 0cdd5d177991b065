#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxbias {

enum class RhoFamily { Biweight, AlphaQuantile };

/// A bounded loss with rho(0) = 0, symmetric, nondecreasing in |u| and
/// saturating at 1. Biweight uses rho_T(u / k); AlphaQuantile is the step
/// I{|u| >= k}.
struct RhoSpec {
  RhoFamily family = RhoFamily::Biweight;
  double k = 1.0;

  static RhoSpec biweight(double k);
  static RhoSpec alpha_quantile(double k = 1.0);

  bool differentiable() const { return family == RhoFamily::Biweight; }
  /// |u| beyond which rho is identically 1.
  double support_edge() const { return k; }

  friend bool operator==(const RhoSpec&, const RhoSpec&) = default;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string to_string(RhoFamily family);
RhoFamily parse_rho_family(const std::string& name);

double rho_eval(const RhoSpec& spec, double u);

/// Score psi(u) = u (1 - (u/k)^2)_+^2. This equals rho'(u) * k^2 / 6; the
/// constant cancels in every efficiency computation.
double psi_eval(const RhoSpec& spec, double u);

/// Derivative of psi_eval.
double psi_prime_eval(const RhoSpec& spec, double u);

/// The fixed factor c with rho'(u) = c * psi_eval(spec, u).
double psi_normalization(const RhoSpec& spec);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Numerical check of the loss conditions (symmetric, nondecreasing,
/// rho(0)=0, bounded with limit 1, finitely many jumps) on a symmetric grid
/// spanning [-scale * 20, scale * 20].
std::vector<CheckResult> validate_rho(const std::function<double(double)>& rho, double scale);
std::vector<CheckResult> validate_rho(const RhoSpec& spec);

}  // namespace maxbias
