#pragma once

#include <functional>
#include <string>
#include <vector>

namespace maxbias {

/// Symmetric error laws. Gaussian and Cauchy double as the two carrier/error
/// models for the bias formulas; the rest appear only in variance tables.
enum class LawKind { Norm, Slash, Cauchy, T3, DoubleExp, ContNormal, Uniform };

/// The joint carrier/error regime the bias formulas are derived under.
enum class Model { Gaussian, Cauchy };

std::string to_string(Model model);
Model parse_model(const std::string& name);

/// A symmetric, unimodal law: scale * Y where Y has the standard form of
/// `kind` (Uniform is on (-1, 1); ContNormal is 0.9 N(0,1) + 0.1 N(0,9)).
struct SymmetricLaw {
  LawKind kind = LawKind::Norm;
  double scale = 1.0;

  static SymmetricLaw of(Model model);

  double density(double x) const;
  double cdf(double x) const;
  /// P(X > x), computed without cancellation for large x.
  double upper_tail(double x) const;
  double quantile(double p) const;
  /// sup{|x| : density(x) > 0}; +inf unless Uniform.
  double support_edge() const;
  /// Beyond this |x| the density is numerically zero (light tails) or the
  /// support ends; +inf for polynomial tails.
  double negligible_beyond() const;
};

/// 2 * int_0^cutoff h(z) f(z) dz, i.e. E[h(|X|) 1{|X| <= cutoff}] for even h.
/// The range is split on a geometric ladder of the law's scale so no single
/// panel hides the bulk of the mass.
double expect_symmetric(const SymmetricLaw& law, const std::function<double(double)>& h,
                        double cutoff);

/// Table-normalized laws: scale chosen so the interquartile range is 1.3490.
double iqr_multiplier(LawKind kind);
SymmetricLaw error_law(LawKind kind);
std::string law_label(LawKind kind);
LawKind parse_law(const std::string& label);
const std::vector<LawKind>& all_laws();

}  // namespace maxbias
