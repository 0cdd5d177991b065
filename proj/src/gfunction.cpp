#include "maxbias/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxbias {
namespace {

const Tolerance kInverse{1e-14, 1e-15, 400};

}  // namespace

GFunction::GFunction(RhoSpec rho, SymmetricLaw law) : rho_(rho), law_(law) {
  log_s_.resize(kTableSize);
  g_table_.resize(kTableSize);
  const double lo = std::log(kTableMin);
  const double hi = std::log(kTableMax);
  for (int i = 0; i < kTableSize; ++i) {
    log_s_[i] = lo + (hi - lo) * i / (kTableSize - 1);
    g_table_[i] = g(std::exp(log_s_[i]));
  }
  unimodal_ = check_unimodal(*this);
  if (unimodal_.unimodal) {
    auto best = std::max_element(unimodal_.table.begin(), unimodal_.table.end(),
                                 [](const PhiSample& a, const PhiSample& b) { return a.phi < b.phi; });
    const auto i = static_cast<int>(best - unimodal_.table.begin());
    const double a = log_s_[std::max(i - 1, 0)];
    const double b = log_s_[std::min(i + 1, kTableSize - 1)];
    const auto ext = maximize_unimodal([this](double x) { return phi(std::exp(x)); }, a, b,
                                       {1e-12, 1e-12, 500});
    peak_ = Peak{std::exp(ext.x), ext.value};
  }
}

double GFunction::expect(const std::function<double(double)>& h, double cutoff) const {
  return expect_symmetric(law_, h, cutoff);
}

double GFunction::g(double s) const {
  if (!(s > 0.0)) throw DomainError("g: scale must be positive");
  const double edge = rho_.k * s;
  const double tail = 2.0 * law_.upper_tail(edge);
  if (rho_.family == RhoFamily::AlphaQuantile) return tail;
  return expect([&](double z) { return rho_eval(rho_, z / s); }, edge) + tail;
}

double GFunction::phi(double s) const {
  if (!(s > 0.0)) throw DomainError("phi: scale must be positive");
  const double edge = rho_.k * s;
  if (rho_.family == RhoFamily::AlphaQuantile) {
    return 2.0 * edge * law_.density(edge);
  }
  // -s g'(s) = E[rho'(Z/s) Z/s] = E[6 v^2 (1 - v^2)^2], v = Z / (k s).
  return expect(
      [&](double z) {
        const double v = z / edge;
        const double w = 1.0 - v * v;
        return 6.0 * v * v * w * w;
      },
      edge);
}

double GFunction::g_inverse(double v) const {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError("g_inverse: value must lie in (0, 1)");
  }
  double lo;
  double hi;
  if (v >= g_table_.front()) {
    hi = log_s_.front();
    lo = hi;
    while (g(std::exp(lo)) < v) {
      hi = lo;
      lo -= std::log(10.0);
      if (lo < -700.0) throw NumericalError("g_inverse: value too close to 1");
    }
  } else if (v <= g_table_.back()) {
    lo = log_s_.back();
    hi = lo;
    while (g(std::exp(hi)) > v) {
      lo = hi;
      hi += std::log(10.0);
      if (hi > 700.0) throw NumericalError("g_inverse: value too close to 0");
    }
  } else {
    // g_table_ is decreasing; find the first entry below v.
    auto it = std::lower_bound(g_table_.begin(), g_table_.end(), v, std::greater<>());
    const auto i = static_cast<std::size_t>(it - g_table_.begin());
    lo = log_s_[i - 1];
    hi = log_s_[i];
  }
  if (lo == hi) return std::exp(lo);
  const double x = find_root([&](double t) { return g(std::exp(t)) - v; }, lo, hi, kInverse);
  return std::exp(x);
}

Peak GFunction::peak() const {
  if (!peak_) {
    std::ostringstream msg;
    msg << "phi is not unimodal for " << to_string(rho_.family) << " k=" << rho_.k;
    if (unimodal_.first_violation) msg << " (slope turns up again near s=" << *unimodal_.first_violation << ")";
    throw NotUnimodal(msg.str());
  }
  return *peak_;
}

UnimodalityDiagnostics check_unimodal(const GFunction& gf) {
  UnimodalityDiagnostics out;
  out.table.reserve(GFunction::kTableSize);
  const double lo = std::log(GFunction::kTableMin);
  const double hi = std::log(GFunction::kTableMax);
  double top = 0.0;
  for (int i = 0; i < GFunction::kTableSize; ++i) {
    const double s = std::exp(lo + (hi - lo) * i / (GFunction::kTableSize - 1));
    const double p = gf.phi(s);
    out.table.push_back({s, p});
    top = std::max(top, p);
  }
  // Slopes below the noise floor carry no sign.
  const double noise = 1e-12 * top;
  bool descending = false;
  bool rose = false;
  for (std::size_t i = 1; i < out.table.size(); ++i) {
    const double d = out.table[i].phi - out.table[i - 1].phi;
    if (std::abs(d) <= noise) continue;
    if (d > 0.0) {
      if (descending) {
        out.first_violation = out.table[i].s;
        out.unimodal = false;
        return out;
      }
      rose = true;
    } else {
      descending = true;
    }
  }
  out.unimodal = rose && descending && top > 0.0;
  return out;
}

bool is_convex_on_grid(const std::function<double(double)>& f, double lo, double hi, int n,
                       double tol) {
  if (!(lo < hi) || n < 3) throw DomainError("is_convex_on_grid: need lo < hi and n >= 3");
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = f(lo + (hi - lo) * i / (n - 1));
  for (int i = 1; i + 1 < n; ++i) {
    if (y[i - 1] - 2.0 * y[i] + y[i + 1] < -tol) return false;
  }
  return true;
}

bool check_g_convex(const GFunction& gf, double lo, double hi) {
  return is_convex_on_grid([&](double s) { return gf.g(s); }, lo, hi);
}

double consistency_k(double b, Model model) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("consistency_k: b must lie in (0, 1)");
  const GFunction unit(RhoSpec::biweight(1.0), model);
  // g_k(s) = g_1(k s), so g_k(1) = b at k = g_1^{-1}(b).
  return unit.g_inverse(b);
}

}  // namespace maxbias
