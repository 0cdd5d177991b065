#pragma once

#include "maxbias/gfunction.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxbias {

enum class EstimatorKind { S, MM, CM };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator(const std::string& name);

/// S{rho, b}, MM{rho1, rho2, b} or CM{rho, b, c}. For MM, `rho` is the
/// initial-scale loss rho1 and `rho2` the final loss.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::S;
  RhoSpec rho;
  RhoSpec rho2;
  double b = 0.5;
  double c = 0.0;

  static EstimatorSpec s(RhoSpec rho, double b);
  static EstimatorSpec mm(RhoSpec rho1, RhoSpec rho2, double b);
  static EstimatorSpec cm(RhoSpec rho, double b, double c);

  /// Throws DomainError on b outside (0,1), c <= 0 for CM, or rho1 <= rho2
  /// somewhere both are unsaturated for MM.
  void validate() const;
};

double breakdown_point(const EstimatorSpec& spec);
double breakdown_point(double b);

enum class PointStatus { Ok, BeyondBreakdown, ConditionViolated, NumericalFailure };

std::string to_string(PointStatus status);

struct BiasPoint {
  double eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = true;
  PointStatus status = PointStatus::Ok;
  std::string note;
  /// For MM: the two sides of g2(gamma) - g2(sigma) < eps / (1 - eps).
  std::optional<std::pair<double, double>> condition;
};

struct BiasCurve {
  std::vector<BiasPoint> points;
  std::vector<std::string> warnings;
};

/// sigma_{b,eps} = g^{-1}[(b - eps)/(1 - eps)] and gamma_{b,eps} = g^{-1}[b/(1 - eps)].
struct ScalePair {
  double sigma;
  double gamma;
  /// An argument of g^{-1} was pulled back into [1e-12, 1 - 1e-12].
  bool clamped = false;
};

ScalePair sigma_gamma(const GFunction& gf, double b, double eps);

/// log(sigma_{b,eps} / gamma_{b,eps}).
double log_scale_ratio(const GFunction& gf, double b, double eps);

/// Maximum bias from the log scale ratio: sqrt(exp(2L) - 1) under the
/// Gaussian model, exp(L) - 1 under the Cauchy model.
double bias_from_log_ratio(double log_ratio, Model model);

BiasPoint s_maxbias(const GFunction& gf, double b, double eps, Model model);

/// Critical points of A_{c,eps}(s) = c (1 - eps) g(s) + log s, i.e. the
/// two solutions of phi(s) = 1 / [(1 - eps) c]. Absent when A is monotone.
struct CriticalPair {
  std::optional<double> sigma_l;
  std::optional<double> sigma_u;
};

struct HalfLineMin {
  double value;
  double argmin;
  CriticalPair critical;
};

double a_function(const GFunction& gf, double c, double eps, double s);
CriticalPair critical_points(const GFunction& gf, double c, double eps);

/// inf_{s >= lower} A_{c,eps}(s), located through the critical-point
/// structure of A rather than by search.
HalfLineMin inf_a_on_halfline(const GFunction& gf, double c, double eps, double lower);

/// D_c(eps) = inf_{s >= sigma} A - inf_{s >= gamma} A.
double d_upper(const GFunction& gf, double b, double c, double eps);

/// h_c(eps, sigma) = A(sigma) - inf_{s >= sigma} A(s).
double h_c(const GFunction& gf, double c, double eps, double sigma);

/// d_c(eps) = h_c(eps, gamma) - h_c(eps, sigma).
double d_c(const GFunction& gf, double b, double c, double eps);

BiasPoint cm_maxbias(const GFunction& gf, double b, double c, double eps, Model model);

/// Same quantity through log(1 + B_CM^2) = log(1 + B_S^2) + 2 d_c (Gaussian)
/// or log(1 + B_CM) = log(1 + B_S) + d_c (Cauchy).
double cm_maxbias_via_dc(const GFunction& gf, double b, double c, double eps, Model model);

/// MM sandwich [l(eps), max{l(eps), u(eps)}]; exact when u <= l.
BiasPoint mm_bounds(const GFunction& gf1, const GFunction& gf2, double b, double eps,
                    Model model);

/// Evaluates the estimator on every grid point. Per-point failures become
/// flagged points; monotonicity violations are reported as warnings.
BiasCurve bias_curve(const EstimatorSpec& spec, Model model, std::span<const double> eps_grid);

}  // namespace maxbias
