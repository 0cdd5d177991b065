#include "maxbias/law.hpp"

#include "maxbias/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace maxbias {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Standard (unscaled) members. Each upper_tail handles x >= 0 only.
double std_density(LawKind kind, double x) {
  const double a = std::abs(x);
  switch (kind) {
    case LawKind::Norm:
      return normal_pdf(a);
    case LawKind::Slash:
      // (phi(0) - phi(x)) / x^2 with its removable singularity filled in.
      if (a < 1e-4) return kInvSqrt2Pi * (0.5 - a * a / 8.0);
      return kInvSqrt2Pi * -std::expm1(-0.5 * a * a) / (a * a);
    case LawKind::Cauchy:
      return 1.0 / (std::numbers::pi * (1.0 + a * a));
    case LawKind::T3: {
      const double d = 3.0 + a * a;
      return 6.0 * std::numbers::sqrt3 / (std::numbers::pi * d * d);
    }
    case LawKind::DoubleExp:
      return 0.5 * std::exp(-a);
    case LawKind::ContNormal:
      return 0.9 * normal_pdf(a) + 0.1 * normal_pdf(a / 3.0) / 3.0;
    case LawKind::Uniform:
      return a <= 1.0 ? 0.5 : 0.0;
  }
  return 0.0;
}

double std_upper_tail(LawKind kind, double a) {
  switch (kind) {
    case LawKind::Norm:
      return normal_tail(a);
    case LawKind::Slash:
      if (a < 1e-4) return 0.5 - a * kInvSqrt2Pi * 0.5;
      return normal_tail(a) - kInvSqrt2Pi * std::expm1(-0.5 * a * a) / a;
    case LawKind::Cauchy:
      return std::atan2(1.0, a) / std::numbers::pi;
    case LawKind::T3: {
      const double th = std::atan2(std::numbers::sqrt3, a);
      return (th - 0.5 * std::sin(2.0 * th)) / std::numbers::pi;
    }
    case LawKind::DoubleExp:
      return 0.5 * std::exp(-a);
    case LawKind::ContNormal:
      return 0.9 * normal_tail(a) + 0.1 * normal_tail(a / 3.0);
    case LawKind::Uniform:
      return a >= 1.0 ? 0.0 : 0.5 * (1.0 - a);
  }
  return 0.0;
}

}  // namespace

std::string to_string(Model model) { return model == Model::Gaussian ? "gaussian" : "cauchy"; }

Model parse_model(const std::string& name) {
  if (name == "gaussian" || name == "normal") return Model::Gaussian;
  if (name == "cauchy") return Model::Cauchy;
  throw DomainError("unknown model: " + name);
}

SymmetricLaw SymmetricLaw::of(Model model) {
  return {model == Model::Gaussian ? LawKind::Norm : LawKind::Cauchy, 1.0};
}

double SymmetricLaw::density(double x) const { return std_density(kind, x / scale) / scale; }

double SymmetricLaw::upper_tail(double x) const {
  const double a = x / scale;
  return a >= 0.0 ? std_upper_tail(kind, a) : 1.0 - std_upper_tail(kind, -a);
}

double SymmetricLaw::cdf(double x) const { return upper_tail(-x); }

double SymmetricLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -quantile(1.0 - p);
  const double target = 1.0 - p;
  double hi = scale;
  while (upper_tail(hi) > target) hi *= 2.0;
  return find_root([&](double x) { return upper_tail(x) - target; }, 0.0, hi,
                   {1e-15, 1e-15, 400});
}

double SymmetricLaw::support_edge() const { return kind == LawKind::Uniform ? scale : kInf; }

double SymmetricLaw::negligible_beyond() const {
  switch (kind) {
    case LawKind::Norm:
      return 40.0 * scale;
    case LawKind::ContNormal:
      return 120.0 * scale;
    case LawKind::DoubleExp:
      return 750.0 * scale;
    case LawKind::Uniform:
      return scale;
    default:
      return kInf;
  }
}

double expect_symmetric(const SymmetricLaw& law, const std::function<double(double)>& h,
                        double cutoff) {
  // Inner quadrature is kept much tighter than the outer solves so that
  // differences like log(sigma / gamma) at tiny contamination stay accurate.
  static const Tolerance kInnerQuad{1e-300, 1e-14, 2000};
  const double end = std::min(cutoff, law.negligible_beyond());
  if (!(end > 0.0)) return 0.0;
  auto integrand = [&](double z) { return h(z) * law.density(z); };
  // Polynomial tails: ladder up to a finite point, then map the rest to [0, 1).
  const double finite_end = std::isinf(end) ? 64.0 * law.scale : end;
  std::vector<double> breaks{0.0};
  for (double x = law.scale; x < finite_end; x *= 8.0) breaks.push_back(x);
  breaks.push_back(finite_end);
  double total = integrate_pieces(integrand, breaks, kInnerQuad);
  if (std::isinf(end)) total += integrate(integrand, finite_end, kInf, kInnerQuad);
  return 2.0 * total;
}

double iqr_multiplier(LawKind kind) {
  switch (kind) {
    case LawKind::Norm: return 1.0;
    case LawKind::Slash: return 0.4587;
    case LawKind::Cauchy: return 0.6745;
    case LawKind::T3: return 0.8818;
    case LawKind::DoubleExp: return 0.9731;
    case LawKind::ContNormal: return 0.9248;
    case LawKind::Uniform: return 1.3490;
  }
  return 1.0;
}

SymmetricLaw error_law(LawKind kind) { return {kind, iqr_multiplier(kind)}; }

std::string law_label(LawKind kind) {
  switch (kind) {
    case LawKind::Norm: return "NORM";
    case LawKind::Slash: return "SL";
    case LawKind::Cauchy: return "CAU";
    case LawKind::T3: return "T3";
    case LawKind::DoubleExp: return "DE";
    case LawKind::ContNormal: return "CN";
    case LawKind::Uniform: return "UNIF";
  }
  return "?";
}

LawKind parse_law(const std::string& label) {
  for (LawKind k : all_laws()) {
    if (law_label(k) == label) return k;
  }
  throw DomainError("unknown error law: " + label);
}

const std::vector<LawKind>& all_laws() {
  static const std::vector<LawKind> laws{LawKind::Norm,      LawKind::Slash,
                                         LawKind::Cauchy,    LawKind::T3,
                                         LawKind::DoubleExp, LawKind::ContNormal,
                                         LawKind::Uniform};
  return laws;
}

}  // namespace maxbias
