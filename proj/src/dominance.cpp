#include "maxbias/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxbias {

double c_of_eps(const GFunction& gf, double b, double eps) {
  if (!(eps > 0.0 && eps < breakdown_point(b))) {
    std::ostringstream msg;
    msg << "c_of_eps: eps = " << eps << " must lie in (0, " << breakdown_point(b) << ")";
    throw DomainError(msg.str());
  }
  return log_scale_ratio(gf, b, eps) / eps;
}

double c_of_eps_limit(const GFunction& gf, double b) {
  return 1.0 / gf.phi(gf.g_inverse(b));
}

std::vector<double> c_profile_grid(double b, int n) {
  const double bd = breakdown_point(b);
  std::vector<double> grid(n);
  // Logistic spacing in t over [-14, 14]: both ends get within ~1e-6 * bd.
  for (int i = 0; i < n; ++i) {
    const double t = -14.0 + 28.0 * i / (n - 1);
    grid[i] = bd / (1.0 + std::exp(-t));
  }
  return grid;
}

std::vector<CProfilePoint> c_profile(const GFunction& gf, double b, int n) {
  std::vector<CProfilePoint> out;
  out.reserve(n);
  for (double eps : c_profile_grid(b, n)) out.push_back({eps, c_of_eps(gf, b, eps)});
  return out;
}

double c_naught(const GFunction& gf, double b, int n) {
  const auto profile = c_profile(gf, b, n);
  const double limit = c_of_eps_limit(gf, b);
  auto best = std::min_element(profile.begin(), profile.end(),
                               [](const auto& x, const auto& y) { return x.c_eps < y.c_eps; });
  if (limit <= best->c_eps) return limit;
  const auto i = best - profile.begin();
  if (i == 0 || i + 1 == static_cast<long>(profile.size())) return best->c_eps;
  const auto ext = maximize_unimodal([&](double e) { return -c_of_eps(gf, b, e); },
                                     profile[i - 1].eps, profile[i + 1].eps, {1e-12, 1e-10, 300});
  return std::min(best->c_eps, -ext.value);
}

double c_one(const GFunction& gf, double b) {
  const Peak pk = gf.peak();
  const double g_m = gf.g(pk.sigma_m);
  if (!(g_m < b)) {
    std::ostringstream msg;
    msg << "c1 needs g(sigma_M) < b; g(sigma_M) = " << g_m << ", b = " << b;
    throw Inapplicable(msg.str());
  }
  return std::log(pk.sigma_m / gf.g_inverse(b)) / (b - g_m);
}

PhiCondition phi_condition(const GFunction& gf, double b) {
  const Peak pk = gf.peak();
  const double g_m = gf.g(pk.sigma_m);
  const double lhs = gf.phi(gf.g_inverse(b));
  const double rhs = (1.0 - g_m) * (1.0 - g_m) * (1.0 - b) / (2.0 - (b + g_m));
  return {lhs, rhs, lhs >= rhs};
}

double c0_lower_bound(const GFunction& gf, double b) {
  const double k = gf.peak().k;
  return (1.0 - b) / k + b / gf.phi(gf.g_inverse(b));
}

std::pair<double, double> convexity_range(const GFunction& gf, double b, double delta) {
  const double eps = breakdown_point(b) - delta;
  const double lo = sigma_gamma(gf, b, std::max(eps, 0.0)).gamma;
  const double hi = 4.0 * gf.peak().sigma_m;
  return {std::min(lo, hi), std::max(lo, hi)};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Dominated: return "Dominated";
    case Verdict::Equal: return "Equal";
    case Verdict::Inapplicable: return "Inapplicable";
  }
  return "?";
}

DominanceReport dominance_report(const GFunction& gf, double b) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("dominance_report: b must lie in (0, 1)");
  DominanceReport rep;
  rep.b = b;
  if (!gf.unimodal_verified()) {
    rep.reason = "phi is not unimodal";
    return rep;
  }
  const Peak pk = gf.peak();
  rep.k = pk.k;
  rep.sigma_m = pk.sigma_m;
  rep.g_sigma_m = gf.g(pk.sigma_m);
  rep.c_of_eps_profile = c_profile(gf, b);
  rep.c0 = c_naught(gf, b);
  rep.c0_limit = c_of_eps_limit(gf, b);
  rep.c0_lower_bound = c0_lower_bound(gf, b);
  rep.phi_cond = phi_condition(gf, b);
  const auto [lo, hi] = convexity_range(gf, b);
  rep.g_convex = check_g_convex(gf, lo, hi);
  rep.g_sigma_m_le_b = rep.g_sigma_m <= b;
  if (rep.g_sigma_m < b) rep.c1 = c_one(gf, b);

  std::vector<std::string> failed;
  if (!rep.g_convex) failed.push_back("g is not convex");
  if (!rep.phi_cond.holds) failed.push_back("phi(sigma_b0) condition fails");
  if (!rep.g_sigma_m_le_b) failed.push_back("g(sigma_M) > b");
  if (rep.c0 <= 1.0 / rep.k) {
    // No c above 1/K is admissible: only the c <= 1/K (identical) regime remains.
    rep.verdict = Verdict::Equal;
    rep.reason = "c_o <= 1/K";
    return rep;
  }
  if (failed.empty() && rep.c1 && *rep.c1 < rep.c0) {
    rep.dominance_interval = std::make_pair(*rep.c1, rep.c0);
    rep.verdict = Verdict::Dominated;
    return rep;
  }
  if (failed.empty()) failed.push_back("interval (c1, c_o] is empty");
  std::ostringstream msg;
  for (std::size_t i = 0; i < failed.size(); ++i) msg << (i ? "; " : "") << failed[i];
  rep.reason = msg.str();
  return rep;
}

double inadmissibility_threshold(RhoFamily family, Model model) {
  if (model != Model::Gaussian) {
    throw DomainError("inadmissibility_threshold: only the Gaussian model is supported");
  }
  const RhoSpec rho = family == RhoFamily::Biweight ? RhoSpec::biweight(1.0) : RhoSpec::alpha_quantile(1.0);
  const GFunction gf(rho, model);
  const double g_m = gf.g(gf.peak().sigma_m);
  auto holds = [&](double b) {
    if (!(g_m <= b)) return false;
    if (!phi_condition(gf, b).holds) return false;
    const auto [lo, hi] = convexity_range(gf, b);
    return check_g_convex(gf, lo, hi);
  };
  constexpr int kScan = 100;
  int first_good = -1;
  for (int j = kScan; j >= 1; --j) {
    const double b = 0.5 * j / kScan;
    if (!holds(b)) break;
    first_good = j;
  }
  if (first_good < 0) throw NotFound("conditions never hold for b in (0, 0.5]");
  if (first_good == 1) return 0.5 / kScan;
  double bad = 0.5 * (first_good - 1) / kScan;
  double good = 0.5 * first_good / kScan;
  while (good - bad > 1e-6) {
    const double mid = 0.5 * (bad + good);
    (holds(mid) ? good : bad) = mid;
  }
  return good;
}

RatioCurve cm_vs_s_ratio_curve(const GFunction& gf, double b, double c,
                               std::span<const double> eps_grid) {
  RatioCurve out{{}, kInf, std::nan("")};
  for (double eps : eps_grid) {
    const double bs = s_maxbias(gf, b, eps, Model::Gaussian).lower;
    if (!(bs >= 1e-12) || !std::isfinite(bs)) {
      out.points.push_back({eps, std::nan(""), true});
      continue;
    }
    const double ratio = cm_maxbias(gf, b, c, eps, Model::Gaussian).lower / bs;
    out.points.push_back({eps, ratio, false});
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      out.argmin_eps = eps;
    }
  }
  return out;
}

BestImprovement best_improvement(const GFunction& gf, double b, std::span<const double> eps_grid,
                                 int n_c) {
  const double c0 = c_naught(gf, b);
  double lo = 1.0 / gf.peak().k;
  try {
    lo = std::max(lo, c_one(gf, b));
  } catch (const Inapplicable&) {
  }
  if (!(lo < c0)) throw Inapplicable("no admissible c above max(c1, 1/K)");
  BestImprovement best{c0, kInf, std::nan("")};
  for (int i = 1; i <= n_c; ++i) {
    const double c = lo + (c0 - lo) * i / n_c;
    const auto curve = cm_vs_s_ratio_curve(gf, b, c, eps_grid);
    if (curve.min_ratio < best.min_ratio) best = {c, curve.min_ratio, curve.argmin_eps};
  }
  return best;
}

}  // namespace maxbias
