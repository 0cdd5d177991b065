#include "maxbias/numerics.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <queue>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace maxbias {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    throw DomainError("tolerance fields must be positive");
  }
}

namespace {

// Gauss-Kronrod 7/15 nodes on [0, 1] (symmetric about 0).
constexpr std::array<double, 8> kKronrodX{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodW{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussW{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodW[7];
  double gauss = fc * kGaussW[3];
  double l1 = std::abs(fc) * kKronrodW[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodX[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += (f1 + f2) * kKronrodW[i];
    l1 += (std::abs(f1) + std::abs(f2)) * kKronrodW[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kGaussW[i / 2];
  }
  const double value = kronrod * half;
  const double error = std::max(std::abs((kronrod - gauss) * half),
                                2.0 * std::numeric_limits<double>::epsilon() * std::abs(l1 * half));
  return {a, b, value, error, l1 * std::abs(half)};
}

}  // namespace

double integrate(const RealFn& f, double a, double b, const Tolerance& tol) {
  if (!(a < b)) {
    throw DomainError("integrate: require a < b");
  }
  if (std::isinf(a)) {
    if (std::isinf(b)) return integrate(f, a, 0.0, tol) + integrate(f, 0.0, b, tol);
    return integrate([&](double y) { return f(-y); }, -b, kInf, tol);
  }
  if (std::isinf(b)) {
    tol.validate();
    // x = a + t / (1 - t) maps [0, 1) onto [a, inf).
    auto mapped = [&](double t) {
      if (t >= 1.0) return 0.0;
      const double w = 1.0 - t;
      return f(a + t / w) / (w * w);
    };
    const std::array<double, 2> unit{0.0, 1.0};
    return integrate_pieces(mapped, unit, tol);
  }
  const std::array<double, 2> ends{a, b};
  return integrate_pieces(f, ends, tol);
}

double integrate_pieces(const RealFn& f, std::span<const double> breaks, const Tolerance& tol) {
  tol.validate();
  if (breaks.size() < 2) throw DomainError("integrate_pieces: need at least two breakpoints");
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i - 1] < breaks[i]) || !std::isfinite(breaks[i])) {
      throw DomainError("integrate_pieces: breakpoints must be finite and increasing");
    }
  }

  // Globally adaptive: always bisect the panel with the largest error.
  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const Panel p = gk15(f, breaks[i - 1], breaks[i]);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    panels.push(p);
  }
  int splits = 0;
  while (error > std::max(tol.abs_tol, tol.rel_tol * l1)) {
    if (splits >= tol.max_iter) {
      std::ostringstream msg;
      msg << "integrate: error estimate " << error << " above tolerance on [" << breaks.front()
          << ", " << breaks.back() << "] after " << splits << " subdivisions";
      throw NumericalError(msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  if (!std::isfinite(value)) {
    throw NumericalError("integrate: non-finite integrand or result");
  }
  return value;
}

double find_root(const RealFn& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (lo > hi) std::swap(lo, hi);
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", "
        << fhi << ")";
    throw BracketError(msg.str());
  }
  auto done = [&](double x0, double x1) {
    const double mid = std::abs(0.5 * (x0 + x1));
    return std::abs(x1 - x0) <= std::max(tol.abs_tol, tol.rel_tol * mid);
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(tol.max_iter);
  auto [x0, x1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
  if (!done(x0, x1)) {
    throw NumericalError("find_root: iteration limit reached");
  }
  return 0.5 * (x0 + x1);
}

Extremum maximize_unimodal(const RealFn& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo < hi)) {
    throw DomainError("maximize_unimodal: require lo < hi");
  }
  const double mid = 0.5 * (lo + hi);
  const double fl = f(lo);
  const double fm = f(mid);
  const double fh = f(hi);
  if (fl == fm && fm == fh) {
    return {mid, fm};
  }
  // Bits of precision implied by rel_tol; Brent cannot do better than sqrt(eps).
  const int bits = std::clamp(static_cast<int>(-std::log2(tol.rel_tol)), 8,
                              std::numeric_limits<double>::digits / 2);
  std::uintmax_t iters = static_cast<std::uintmax_t>(tol.max_iter);
  auto [x, neg] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi,
                                                        bits, iters);
  if (iters >= static_cast<std::uintmax_t>(tol.max_iter)) {
    throw NumericalError("maximize_unimodal: iteration limit reached");
  }
  Extremum best{x, -neg};
  // Brent never evaluates the endpoints; a monotone f peaks there.
  if (fl > best.value) best = {lo, fl};
  if (fh > best.value) best = {hi, fh};
  return best;
}

}  // namespace maxbias
