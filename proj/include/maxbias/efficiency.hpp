#pragma once

#include "maxbias/bias.hpp"
#include "maxbias/law.hpp"

#include <optional>
#include <string>
#include <vector>

namespace maxbias {

class DegenerateEfficiency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Target efficiency outside what the family can reach.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : std::out_of_range(what), attainable_lo(lo), attainable_hi(hi) {}
  double attainable_lo;
  double attainable_hi;
};

/// Slope variance factor of an M-estimate with fixed residual scale:
/// scale^2 E[psi(u/scale)^2] / (E[psi'(u/scale)])^2 for u drawn from `law`.
/// Invariant to any constant multiplying psi.
double m_avar(const RhoSpec& rho, double scale, const SymmetricLaw& law);

/// Same formula with psi multiplied by `factor`; exists to exercise the invariance.
double m_avar_scaled_psi(const RhoSpec& rho, double scale, const SymmetricLaw& law, double factor);

/// |E psi'| / E|psi'| at the given scale: near zero when the positive and
/// negative parts of psi' almost cancel and the variance blows up.
double psi_prime_cancellation(const RhoSpec& rho, double scale, const SymmetricLaw& law);

/// The s solving E_law rho(u / s) = b.
double s_scale_at_law(const GFunction& gf_law, double b);

struct CmScale {
  double scale;
  bool binding;
};

/// Residual scale of the CM functional at a law: minimizer of
/// c g(s) + log s over s >= s_scale_at_law(b).
CmScale cm_model_scale(const GFunction& gf_law, double b, double c);

struct EfficiencyReport {
  EstimatorSpec estimator;
  LawKind law;
  double model_scale;
  double avar;
  /// 1 / avar; only set at the normal law, where least squares has avar 1.
  std::optional<double> gaussian_efficiency;
  bool constraint_binding = false;
};

EfficiencyReport evaluate_efficiency(const EstimatorSpec& spec, LawKind law);

double gaussian_efficiency(const EstimatorSpec& spec);

enum class TuneKind {
  MmK2,          // k2 for a given k1 and b
  CmC,           // c for a given b
  SBreakdown,    // b for an S-estimate
  SConsistency,  // biweight k with g(1) = b under the Gaussian model
};

struct TuneRequest {
  TuneKind kind;
  double b = 0.5;
  double target_eff = 0.95;
  /// MM only; defaults to consistency_k(b).
  std::optional<double> k1;
};

struct TuneResult {
  double value;
  double achieved_eff;
};

/// Monotone search for the constant whose Gaussian efficiency equals target.
/// Throws RangeError carrying the attainable efficiency interval.
TuneResult tune(const TuneRequest& req);

struct NamedEstimator {
  std::string label;
  EstimatorSpec spec;
};

/// The five biweight rows S95, MM95, CM95, CM61, S28.
std::vector<NamedEstimator> reference_rows();

/// Cells whose psi' cancellation ratio falls below this are flagged as near-degenerate.
inline constexpr double kNearDegenerate = 0.1;

struct AvarCell {
  std::string estimator;
  LawKind law;
  double avar;
  bool binding;
  /// Empty unless the cell failed or is near-degenerate.
  std::string flag;
};

std::vector<AvarCell> avar_cells(const std::vector<NamedEstimator>& rows,
                                  const std::vector<LawKind>& laws);

}  // namespace maxbias
