#include "maxbias/rho.hpp"

#include "maxbias/numerics.hpp"

#include <cmath>
#include <sstream>

namespace maxbias {

RhoSpec RhoSpec::biweight(double k) {
  if (!(k > 0.0)) throw DomainError("biweight: k must be positive");
  return {RhoFamily::Biweight, k};
}

RhoSpec RhoSpec::alpha_quantile(double k) {
  if (!(k > 0.0)) throw DomainError("alpha-quantile: k must be positive");
  return {RhoFamily::AlphaQuantile, k};
}

std::string to_string(RhoFamily family) {
  return family == RhoFamily::Biweight ? "biweight" : "quantile";
}

RhoFamily parse_rho_family(const std::string& name) {
  if (name == "biweight") return RhoFamily::Biweight;
  if (name == "quantile" || name == "alpha-quantile" || name == "step") {
    return RhoFamily::AlphaQuantile;
  }
  throw DomainError("unknown rho family: " + name);
}

double rho_eval(const RhoSpec& spec, double u) {
  const double v = std::abs(u) / spec.k;
  if (spec.family == RhoFamily::AlphaQuantile) {
    return v >= 1.0 ? 1.0 : 0.0;
  }
  if (v >= 1.0) return 1.0;
  const double v2 = v * v;
  return v2 * (3.0 + v2 * (-3.0 + v2));
}

double psi_eval(const RhoSpec& spec, double u) {
  if (!spec.differentiable()) {
    throw UnsupportedOperation("psi is undefined for the alpha-quantile loss");
  }
  const double v = u / spec.k;
  if (std::abs(v) >= 1.0) return 0.0;
  const double w = 1.0 - v * v;
  return u * w * w;
}

double psi_prime_eval(const RhoSpec& spec, double u) {
  if (!spec.differentiable()) {
    throw UnsupportedOperation("psi is undefined for the alpha-quantile loss");
  }
  const double v = u / spec.k;
  if (std::abs(v) >= 1.0) return 0.0;
  const double v2 = v * v;
  return (1.0 - v2) * (1.0 - 5.0 * v2);
}

double psi_normalization(const RhoSpec& spec) {
  if (!spec.differentiable()) {
    throw UnsupportedOperation("psi is undefined for the alpha-quantile loss");
  }
  return 6.0 / (spec.k * spec.k);
}

std::vector<CheckResult> validate_rho(const std::function<double(double)>& rho, double scale) {
  constexpr int kPoints = 20001;
  const double span = 20.0 * scale;
  std::vector<double> grid(kPoints);
  std::vector<double> values(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = -span + 2.0 * span * i / (kPoints - 1);
    values[i] = rho(grid[i]);
  }
  const int center = kPoints / 2;
  std::vector<CheckResult> out;

  {
    const double r0 = rho(0.0);
    out.push_back({"rho(0)=0", r0 == 0.0, "rho(0) = " + std::to_string(r0)});
  }
  {
    double worst = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      worst = std::max(worst, std::abs(values[i] - values[kPoints - 1 - i]));
    }
    out.push_back({"symmetric", worst <= 1e-14, "max |rho(u) - rho(-u)| = " + std::to_string(worst)});
  }
  {
    bool ok = true;
    std::ostringstream where;
    for (int i = center + 1; i < kPoints; ++i) {
      if (values[i] < values[i - 1] - 1e-14) {
        ok = false;
        where << "decrease at u = " << grid[i];
        break;
      }
    }
    out.push_back({"nondecreasing on [0,inf)", ok, ok ? "ok" : where.str()});
  }
  {
    double sup = 0.0;
    bool finite = true;
    for (double v : values) {
      if (!std::isfinite(v)) finite = false;
      sup = std::max(sup, v);
    }
    const double far = rho(1e6 * scale);
    const bool ok = finite && sup <= 1.0 + 1e-14 && std::abs(far - 1.0) <= 1e-9;
    std::ostringstream detail;
    detail << "sup on grid = " << sup << ", rho(1e6*scale) = " << far;
    out.push_back({"bounded with limit 1", ok, detail.str()});
  }
  {
    // A jump is a grid step whose size does not shrink under refinement.
    int jumps = 0;
    std::ostringstream where;
    for (int i = center + 1; i < kPoints; ++i) {
      const double step = std::abs(values[i] - values[i - 1]);
      if (step > 1e-2) {
        // Halve toward the larger change; a jump keeps its size, a steep ramp does not.
        double a = grid[i - 1];
        double b = grid[i];
        double ra = values[i - 1];
        double rb = values[i];
        for (int it = 0; it < 60 && b - a > 1e-15 * scale; ++it) {
          const double m = 0.5 * (a + b);
          const double rm = rho(m);
          if (std::abs(rm - ra) >= std::abs(rb - rm)) {
            b = m;
            rb = rm;
          } else {
            a = m;
            ra = rm;
          }
        }
        const double fine = std::abs(rb - ra);
        if (fine > 0.5 * step) {
          ++jumps;
          where << (jumps > 1 ? ", " : "") << "|u| ~ " << 0.5 * (a + b);
        }
      }
    }
    out.push_back({"finitely many discontinuities", true,
                   jumps == 0 ? "continuous on grid"
                              : std::to_string(jumps) + " jump(s) at " + where.str()});
  }
  return out;
}

std::vector<CheckResult> validate_rho(const RhoSpec& spec) {
  return validate_rho([spec](double u) { return rho_eval(spec, u); }, spec.k);
}

}  // namespace maxbias
