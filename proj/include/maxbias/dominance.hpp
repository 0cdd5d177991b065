#pragma once

#include "maxbias/bias.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxbias {

/// A hypothesis needed for the dominance construction does not hold.
class Inapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// c(eps) = log(sigma_{b,eps} / gamma_{b,eps}) / eps, for 0 < eps < min(b, 1-b).
double c_of_eps(const GFunction& gf, double b, double eps);

/// lim_{eps -> 0+} c(eps) = 1 / phi(sigma_{b,0}).
double c_of_eps_limit(const GFunction& gf, double b);

struct CProfilePoint {
  double eps;
  double c_eps;
};

/// `n` points on (0, min(b, 1-b)), dense toward both ends (logistic spacing).
std::vector<double> c_profile_grid(double b, int n = 512);
std::vector<CProfilePoint> c_profile(const GFunction& gf, double b, int n = 512);

/// c_o = inf_{0 < eps < min(b,1-b)} c(eps): grid minimum (including the
/// analytic eps -> 0 limit) refined locally when it lies in the interior.
double c_naught(const GFunction& gf, double b, int n = 512);

/// c_1 = log(sigma_M / sigma_{b,0}) / (b - g(sigma_M)).
/// Throws Inapplicable when g(sigma_M) >= b.
double c_one(const GFunction& gf, double b);

struct PhiCondition {
  double lhs;  // phi(sigma_{b,0})
  double rhs;  // [1 - g(sigma_M)]^2 (1 - b) / (2 - [b + g(sigma_M)])
  bool holds;
};

PhiCondition phi_condition(const GFunction& gf, double b);

/// (1 - b)/K + b/phi(gamma_{b,0}); lies strictly above 1/K and at or below c_o.
double c0_lower_bound(const GFunction& gf, double b);

/// [gamma_{b, eps* - delta}, 4 sigma_M]: the scale range on which convexity of g matters.
std::pair<double, double> convexity_range(const GFunction& gf, double b, double delta = 1e-3);

enum class Verdict { Dominated, Equal, Inapplicable };

std::string to_string(Verdict v);

struct DominanceReport {
  double b = 0.0;
  double k = 0.0;
  double sigma_m = 0.0;
  double g_sigma_m = 0.0;
  std::vector<CProfilePoint> c_of_eps_profile;
  double c0 = 0.0;
  double c0_limit = 0.0;
  std::optional<double> c1;
  double c0_lower_bound = 0.0;
  PhiCondition phi_cond{};
  bool g_convex = false;
  bool g_sigma_m_le_b = false;
  /// (c1, c0]; absent when empty.
  std::optional<std::pair<double, double>> dominance_interval;
  Verdict verdict = Verdict::Inapplicable;
  std::string reason;
};

DominanceReport dominance_report(const GFunction& gf, double b);

/// Smallest b (to 1e-4) above which convexity of g, the phi(sigma_{b,0})
/// condition and g(sigma_M) <= b all hold. Gaussian model only.
double inadmissibility_threshold(RhoFamily family, Model model = Model::Gaussian);

struct RatioPoint {
  double eps;
  double ratio;
  bool skipped;
};

struct RatioCurve {
  std::vector<RatioPoint> points;
  double min_ratio;
  double argmin_eps;
};

/// B_CM / B_S along the grid (Gaussian model).
RatioCurve cm_vs_s_ratio_curve(const GFunction& gf, double b, double c,
                               std::span<const double> eps_grid);

struct BestImprovement {
  double c;
  double min_ratio;
  double eps;
};

/// Scans admissible c in (max(c1, 1/K), c_o] for the smallest B_CM / B_S
/// reached anywhere on the grid.
BestImprovement best_improvement(const GFunction& gf, double b, std::span<const double> eps_grid,
                                 int n_c = 64);

}  // namespace maxbias
