#pragma once

#include "maxbias/law.hpp"
#include "maxbias/numerics.hpp"
#include "maxbias/rho.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace maxbias {

class NotUnimodal : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct PhiSample {
  double s;
  double phi;
};

struct UnimodalityDiagnostics {
  bool unimodal = false;
  /// Scale at which the slope of phi turned positive again, if it did.
  std::optional<double> first_violation;
  std::vector<PhiSample> table;
};

struct Peak {
  double sigma_m;
  double k;  // phi(sigma_m)
};

/// g(s) = E rho(Z / s) for Z drawn from `law`, together with
/// phi(s) = -s g'(s) and the peak of phi.
///
/// Construction tabulates g and phi on 2048 log-spaced scales in [1e-4, 1e4].
/// The table brackets inversions and locates the peak; point values always
/// come from direct quadrature (or closed forms for the step loss).
/// Immutable after construction.
class GFunction {
 public:
  GFunction(RhoSpec rho, SymmetricLaw law);
  GFunction(RhoSpec rho, Model model) : GFunction(rho, SymmetricLaw::of(model)) {}

  const RhoSpec& rho() const { return rho_; }
  const SymmetricLaw& law() const { return law_; }

  /// Strictly decreasing from 1 (s -> 0) to 0 (s -> inf).
  double g(double s) const;
  /// The s > 0 with g(s) = v, for v in (0, 1).
  double g_inverse(double v) const;
  double phi(double s) const;

  /// Throws NotUnimodal when phi was not found unimodal.
  Peak peak() const;
  bool unimodal_verified() const { return unimodal_.unimodal; }
  const UnimodalityDiagnostics& unimodal() const { return unimodal_; }

  static constexpr int kTableSize = 2048;
  static constexpr double kTableMin = 1e-4;
  static constexpr double kTableMax = 1e4;

 private:
  double expect(const std::function<double(double)>& h, double cutoff) const;

  RhoSpec rho_;
  SymmetricLaw law_;
  std::vector<double> log_s_;
  std::vector<double> g_table_;
  UnimodalityDiagnostics unimodal_;
  std::optional<Peak> peak_;
};

/// Scan phi over the table and decide unimodality (single +/- slope change).
UnimodalityDiagnostics check_unimodal(const GFunction& gf);

/// True when every discrete second difference of f on an n-point uniform grid
/// over [lo, hi] is >= -tol.
bool is_convex_on_grid(const std::function<double(double)>& f, double lo, double hi, int n = 400,
                       double tol = 1e-8);

bool check_g_convex(const GFunction& gf, double lo, double hi);

/// Biweight k with E rho_T(Z / k) = b under `model`, i.e. the k that makes the
/// scale functional consistent (g(1) = b).
double consistency_k(double b, Model model = Model::Gaussian);

}  // namespace maxbias
