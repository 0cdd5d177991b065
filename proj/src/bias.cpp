#include "maxbias/bias.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxbias {
namespace {

constexpr double kArgFloor = 1e-12;
const Tolerance kCritical{1e-14, 1e-15, 400};

BiasPoint zero_point(double eps) { return {eps, 0.0, 0.0, true, PointStatus::Ok, {}, {}}; }

BiasPoint beyond_point(double eps, double bd) {
  std::ostringstream msg;
  msg << "eps >= breakdown point " << bd;
  return {eps, kInf, kInf, true, PointStatus::BeyondBreakdown, msg.str(), {}};
}

double bias_from_ratio(double ratio, Model model) {
  if (!std::isfinite(ratio)) return kInf;
  if (model == Model::Gaussian) return std::sqrt(std::max(0.0, (ratio - 1.0) * (ratio + 1.0)));
  return ratio - 1.0;
}

}  // namespace

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::S: return "s";
    case EstimatorKind::MM: return "mm";
    case EstimatorKind::CM: return "cm";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "s" || name == "S") return EstimatorKind::S;
  if (name == "mm" || name == "MM") return EstimatorKind::MM;
  if (name == "cm" || name == "CM") return EstimatorKind::CM;
  throw DomainError("unknown estimator: " + name);
}

EstimatorSpec EstimatorSpec::s(RhoSpec rho, double b) {
  EstimatorSpec spec{EstimatorKind::S, rho, rho, b, 0.0};
  spec.validate();
  return spec;
}

EstimatorSpec EstimatorSpec::mm(RhoSpec rho1, RhoSpec rho2, double b) {
  EstimatorSpec spec{EstimatorKind::MM, rho1, rho2, b, 0.0};
  spec.validate();
  return spec;
}

EstimatorSpec EstimatorSpec::cm(RhoSpec rho, double b, double c) {
  EstimatorSpec spec{EstimatorKind::CM, rho, rho, b, c};
  spec.validate();
  return spec;
}

void EstimatorSpec::validate() const {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0, 1)");
  if (!(rho.k > 0.0) || !(rho2.k > 0.0)) throw DomainError("rho scale k must be positive");
  if (kind == EstimatorKind::CM && !(c > 0.0)) throw DomainError("CM tuning constant c must be > 0");
  if (kind == EstimatorKind::MM) {
    const double span = 2.0 * std::max(rho.k, rho2.k);
    for (int i = 1; i <= 2000; ++i) {
      const double u = span * i / 2000.0;
      const double r1 = rho_eval(rho, u);
      const double r2 = rho_eval(rho2, u);
      if (r1 == 1.0 && r2 == 1.0) continue;
      if (!(r1 > r2)) {
        std::ostringstream msg;
        msg << "MM requires rho1 > rho2; fails at u = " << u;
        throw DomainError(msg.str());
      }
    }
  }
}

double breakdown_point(double b) { return std::min(b, 1.0 - b); }
double breakdown_point(const EstimatorSpec& spec) { return breakdown_point(spec.b); }

std::string to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::BeyondBreakdown: return "beyond-breakdown";
    case PointStatus::ConditionViolated: return "condition-violated";
    case PointStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

ScalePair sigma_gamma(const GFunction& gf, double b, double eps) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("sigma_gamma: b must lie in (0, 1)");
  if (!(eps >= 0.0)) throw DomainError("sigma_gamma: eps must be >= 0");
  if (!(eps < breakdown_point(b))) {
    std::ostringstream msg;
    msg << "sigma_gamma: eps = " << eps << " must be below min(b, 1 - b) = " << breakdown_point(b);
    throw DomainError(msg.str());
  }
  double vs = (b - eps) / (1.0 - eps);
  double vg = b / (1.0 - eps);
  bool clamped = false;
  if (vs < kArgFloor) {
    vs = kArgFloor;
    clamped = true;
  }
  if (vg > 1.0 - kArgFloor) {
    vg = 1.0 - kArgFloor;
    clamped = true;
  }
  if (eps == 0.0) {
    const double s0 = gf.g_inverse(vs);
    return {s0, s0, clamped};
  }
  return {gf.g_inverse(vs), gf.g_inverse(vg), clamped};
}

double log_scale_ratio(const GFunction& gf, double b, double eps) {
  const auto sg = sigma_gamma(gf, b, eps);
  return std::log(sg.sigma / sg.gamma);
}

double bias_from_log_ratio(double log_ratio, Model model) {
  if (model == Model::Gaussian) return std::sqrt(std::max(0.0, std::expm1(2.0 * log_ratio)));
  return std::expm1(log_ratio);
}

BiasPoint s_maxbias(const GFunction& gf, double b, double eps, Model model) {
  const double bd = breakdown_point(b);
  if (eps <= 0.0) return zero_point(eps);
  if (eps >= bd) return beyond_point(eps, bd);
  const auto sg = sigma_gamma(gf, b, eps);
  BiasPoint p = zero_point(eps);
  p.lower = p.upper = bias_from_log_ratio(std::log(sg.sigma / sg.gamma), model);
  if (sg.clamped) p.note = "g^{-1} argument clamped";
  return p;
}

double a_function(const GFunction& gf, double c, double eps, double s) {
  return c * (1.0 - eps) * gf.g(s) + std::log(s);
}

CriticalPair critical_points(const GFunction& gf, double c, double eps) {
  if (!(c > 0.0)) throw DomainError("critical_points: c must be positive");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("critical_points: eps must lie in [0, 1)");
  const Peak pk = gf.peak();
  const double slope = c * (1.0 - eps) * pk.k;
  if (slope <= 1.0 + 1e-10) return {};
  const double target = 1.0 / ((1.0 - eps) * c);
  auto f = [&](double x) { return gf.phi(std::exp(x)) - target; };
  const double xm = std::log(pk.sigma_m);
  double lo = xm;
  while (f(lo) >= 0.0) {
    lo -= std::log(2.0);
    if (lo < -700.0) throw NumericalError("critical_points: cannot bracket sigma_L");
  }
  double hi = xm;
  while (f(hi) >= 0.0) {
    hi += std::log(2.0);
    if (hi > 700.0) throw NumericalError("critical_points: cannot bracket sigma_U");
  }
  CriticalPair cp;
  try {
    cp.sigma_l = std::exp(find_root(f, lo, xm, kCritical));
    cp.sigma_u = std::exp(find_root(f, xm, hi, kCritical));
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg << "critical_points(c=" << c << ", eps=" << eps << ", target phi=" << target
        << ", K=" << pk.k << "): " << e.what();
    throw NumericalError(msg.str());
  }
  return cp;
}

HalfLineMin inf_a_on_halfline(const GFunction& gf, double c, double eps, double lower) {
  if (!(lower > 0.0)) throw DomainError("inf_a_on_halfline: lower must be positive");
  const CriticalPair cp = critical_points(gf, c, eps);
  const double a_lower = a_function(gf, c, eps, lower);
  if (!cp.sigma_u) return {a_lower, lower, cp};
  const double su = *cp.sigma_u;
  const double sl = *cp.sigma_l;
  if (lower >= su) return {a_lower, lower, cp};
  const double a_u = a_function(gf, c, eps, su);
  if (lower > sl) return {a_u, su, cp};
  if (a_lower <= a_u) return {a_lower, lower, cp};
  return {a_u, su, cp};
}

double d_upper(const GFunction& gf, double b, double c, double eps) {
  const auto sg = sigma_gamma(gf, b, eps);
  return inf_a_on_halfline(gf, c, eps, sg.sigma).value -
         inf_a_on_halfline(gf, c, eps, sg.gamma).value;
}

double h_c(const GFunction& gf, double c, double eps, double sigma) {
  const auto m = inf_a_on_halfline(gf, c, eps, sigma);
  if (m.argmin == sigma) return 0.0;
  return a_function(gf, c, eps, sigma) - m.value;
}

double d_c(const GFunction& gf, double b, double c, double eps) {
  const auto sg = sigma_gamma(gf, b, eps);
  return h_c(gf, c, eps, sg.gamma) - h_c(gf, c, eps, sg.sigma);
}

BiasPoint cm_maxbias(const GFunction& gf, double b, double c, double eps, Model model) {
  if (!(c > 0.0)) throw DomainError("cm_maxbias: c must be positive");
  const double bd = breakdown_point(b);
  if (eps <= 0.0) return zero_point(eps);
  if (eps >= bd) return beyond_point(eps, bd);
  const double d = d_upper(gf, b, c, eps);
  BiasPoint p = zero_point(eps);
  if (model == Model::Gaussian) {
    p.lower = std::sqrt(std::max(0.0, std::expm1(2.0 * c * eps + 2.0 * d)));
  } else {
    p.lower = std::expm1(d + c * eps);
  }
  p.upper = p.lower;
  return p;
}

double cm_maxbias_via_dc(const GFunction& gf, double b, double c, double eps, Model model) {
  if (eps <= 0.0) return 0.0;
  if (eps >= breakdown_point(b)) return kInf;
  const double log_ratio = log_scale_ratio(gf, b, eps);
  const double dc = d_c(gf, b, c, eps);
  // Gaussian: log(1 + B^2) = 2 log_ratio + 2 d_c. Cauchy: log(1 + B) = log_ratio + d_c.
  return bias_from_log_ratio(log_ratio + dc, model);
}

BiasPoint mm_bounds(const GFunction& gf1, const GFunction& gf2, double b, double eps,
                    Model model) {
  const double bd = breakdown_point(b);
  if (eps <= 0.0) return zero_point(eps);
  if (eps >= bd) return beyond_point(eps, bd);
  BiasPoint p = zero_point(eps);
  if (!gf2.unimodal_verified()) {
    p.status = PointStatus::ConditionViolated;
    p.lower = p.upper = std::nan("");
    p.exact = false;
    p.note = "phi of rho2 is not unimodal";
    return p;
  }
  const auto sg = sigma_gamma(gf1, b, eps);
  const double q = eps / (1.0 - eps);
  const double g2_sigma = gf2.g(sg.sigma);
  const double g2_gamma = gf2.g(sg.gamma);
  const double lhs = g2_gamma - g2_sigma;
  p.condition = std::make_pair(lhs, q);
  if (!(lhs < q)) {
    std::ostringstream msg;
    msg << "g2(gamma) - g2(sigma) = " << lhs << " is not below eps/(1-eps) = " << q;
    p.status = PointStatus::ConditionViolated;
    p.lower = p.upper = std::nan("");
    p.exact = false;
    p.note = msg.str();
    return p;
  }
  auto bound = [&](double scale, double g2_at_scale) {
    const double arg = g2_at_scale + q;
    if (arg >= 1.0) return kInf;
    return bias_from_ratio(scale / gf2.g_inverse(arg), model);
  };
  const double l = bound(sg.sigma, g2_sigma);
  const double u = bound(sg.gamma, g2_gamma);
  p.lower = l;
  p.upper = std::max(l, u);
  p.exact = u <= l;
  const double bs = bias_from_log_ratio(std::log(sg.sigma / sg.gamma), model);
  if (l < bs * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "lower bound " << l << " fell below the rho1 S-estimate bias " << bs;
    p.note = msg.str();
  }
  return p;
}

BiasCurve bias_curve(const EstimatorSpec& spec, Model model, std::span<const double> eps_grid) {
  spec.validate();
  for (std::size_t i = 1; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > eps_grid[i - 1])) throw DomainError("bias_curve: grid must be strictly increasing");
  }
  const GFunction gf(spec.rho, model);
  std::optional<GFunction> gf2;
  if (spec.kind == EstimatorKind::MM) gf2.emplace(spec.rho2, model);

  BiasCurve curve;
  curve.points.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    BiasPoint p;
    try {
      switch (spec.kind) {
        case EstimatorKind::S: p = s_maxbias(gf, spec.b, eps, model); break;
        case EstimatorKind::CM: p = cm_maxbias(gf, spec.b, spec.c, eps, model); break;
        case EstimatorKind::MM: p = mm_bounds(gf, *gf2, spec.b, eps, model); break;
      }
    } catch (const NumericalError& e) {
      p = {eps, std::nan(""), std::nan(""), false, PointStatus::NumericalFailure, e.what(), {}};
    }
    curve.points.push_back(std::move(p));
  }

  const BiasPoint* prev = nullptr;
  for (const auto& p : curve.points) {
    if (p.status != PointStatus::Ok) {
      std::ostringstream msg;
      msg << "eps=" << p.eps << ": " << to_string(p.status) << (p.note.empty() ? "" : ": ") << p.note;
      curve.warnings.push_back(msg.str());
      continue;
    }
    if (prev && (p.lower < prev->lower - 1e-9 || p.upper < prev->upper - 1e-9)) {
      std::ostringstream msg;
      msg << "monotonicity violated between eps=" << prev->eps << " and eps=" << p.eps;
      curve.warnings.push_back(msg.str());
    }
    prev = &p;
  }
  return curve;
}

}  // namespace maxbias
