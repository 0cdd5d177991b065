#include "maxbias/efficiency.hpp"

#include <cmath>
#include <sstream>

namespace maxbias {
namespace {

const Tolerance kTune{1e-10, 1e-10, 300};

double law_unimodal_peak_k(const GFunction& gf) { return gf.peak().k; }

}  // namespace

double m_avar_scaled_psi(const RhoSpec& rho, double scale, const SymmetricLaw& law, double factor) {
  if (!rho.differentiable()) {
    throw UnsupportedOperation("asymptotic variance needs a differentiable rho");
  }
  if (!(scale > 0.0)) throw DomainError("m_avar: scale must be positive");
  // psi vanishes beyond k * scale, so both integrals are compactly supported.
  const double edge = rho.k * scale;
  const double num = expect_symmetric(
      law,
      [&](double u) {
        const double p = factor * psi_eval(rho, u / scale);
        return p * p;
      },
      edge);
  const double den =
      expect_symmetric(law, [&](double u) { return factor * psi_prime_eval(rho, u / scale); }, edge);
  if (std::abs(den) < 1e-8) {
    std::ostringstream msg;
    msg << "E psi' = " << den << " is too close to zero";
    throw DegenerateEfficiency(msg.str());
  }
  return scale * scale * num / (den * den);
}

double m_avar(const RhoSpec& rho, double scale, const SymmetricLaw& law) {
  return m_avar_scaled_psi(rho, scale, law, 1.0);
}

double psi_prime_cancellation(const RhoSpec& rho, double scale, const SymmetricLaw& law) {
  if (!rho.differentiable()) {
    throw UnsupportedOperation("psi' needs a differentiable rho");
  }
  const double edge = rho.k * scale;
  const double net = expect_symmetric(law, [&](double u) { return psi_prime_eval(rho, u / scale); }, edge);
  const double gross =
      expect_symmetric(law, [&](double u) { return std::abs(psi_prime_eval(rho, u / scale)); }, edge);
  return std::abs(net) / gross;
}

double s_scale_at_law(const GFunction& gf_law, double b) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("s_scale_at_law: b must lie in (0, 1)");
  return gf_law.g_inverse(b);
}

CmScale cm_model_scale(const GFunction& gf_law, double b, double c) {
  if (!(c > 0.0)) throw DomainError("cm_model_scale: c must be positive");
  const double s_scale = s_scale_at_law(gf_law, b);
  if (c * law_unimodal_peak_k(gf_law) <= 1.0) return {s_scale, true};
  const auto m = inf_a_on_halfline(gf_law, c, 0.0, s_scale);
  return {m.argmin, m.argmin == s_scale};
}

EfficiencyReport evaluate_efficiency(const EstimatorSpec& spec, LawKind law_kind) {
  spec.validate();
  const SymmetricLaw law = error_law(law_kind);
  const GFunction gf(spec.rho, law);
  EfficiencyReport rep{spec, law_kind, 0.0, 0.0, std::nullopt, false};
  switch (spec.kind) {
    case EstimatorKind::S:
      rep.model_scale = s_scale_at_law(gf, spec.b);
      rep.avar = m_avar(spec.rho, rep.model_scale, law);
      rep.constraint_binding = true;
      break;
    case EstimatorKind::MM:
      rep.model_scale = s_scale_at_law(gf, spec.b);
      rep.avar = m_avar(spec.rho2, rep.model_scale, law);
      break;
    case EstimatorKind::CM: {
      const auto cs = cm_model_scale(gf, spec.b, spec.c);
      rep.model_scale = cs.scale;
      rep.constraint_binding = cs.binding;
      rep.avar = m_avar(spec.rho, cs.scale, law);
      break;
    }
  }
  if (law_kind == LawKind::Norm) rep.gaussian_efficiency = 1.0 / rep.avar;
  return rep;
}

double gaussian_efficiency(const EstimatorSpec& spec) {
  return *evaluate_efficiency(spec, LawKind::Norm).gaussian_efficiency;
}

TuneResult tune(const TuneRequest& req) {
  if (!(req.b > 0.0 && req.b < 1.0)) throw DomainError("tune: b must lie in (0, 1)");
  if (req.kind == TuneKind::SConsistency) {
    const double k = consistency_k(req.b);
    return {k, gaussian_efficiency(EstimatorSpec::s(RhoSpec::biweight(k), req.b))};
  }

  // Each branch maps a search coordinate x to an efficiency that is
  // monotone in x, plus the bracket [lo, hi] and the attainable interval.
  std::function<double(double)> eff_of;
  std::function<double(double)> value_of = [](double x) { return x; };
  double lo = 0.0;
  double hi = 0.0;
  switch (req.kind) {
    case TuneKind::MmK2: {
      const double k1 = req.k1.value_or(consistency_k(req.b));
      const double scale = s_scale_at_law(GFunction(RhoSpec::biweight(k1), Model::Gaussian), req.b);
      const SymmetricLaw norm = error_law(LawKind::Norm);
      eff_of = [=](double k2) { return 1.0 / m_avar(RhoSpec::biweight(k2), scale, norm); };
      lo = k1 * (1.0 + 1e-9);
      hi = 200.0 * k1;
      break;
    }
    case TuneKind::CmC: {
      const RhoSpec rho = RhoSpec::biweight(1.0);
      const GFunction gf(rho, SymmetricLaw::of(Model::Gaussian));
      const SymmetricLaw norm = error_law(LawKind::Norm);
      eff_of = [=, &gf](double log_c) {
        return 1.0 / m_avar(rho, cm_model_scale(gf, req.b, std::exp(log_c)).scale, norm);
      };
      value_of = [](double x) { return std::exp(x); };
      lo = std::log(1.0 / gf.peak().k);
      hi = std::log(1e4);
      const double e_lo = eff_of(lo);
      const double e_hi = eff_of(hi);
      if (!(req.target_eff > e_lo && req.target_eff < e_hi)) {
        std::ostringstream msg;
        msg << "target efficiency " << req.target_eff << " outside attainable (" << e_lo << ", "
            << e_hi << ")";
        throw RangeError(msg.str(), e_lo, e_hi);
      }
      return {value_of(find_root([&](double x) { return eff_of(x) - req.target_eff; }, lo, hi, kTune)),
              req.target_eff};
    }
    case TuneKind::SBreakdown: {
      eff_of = [](double b) { return gaussian_efficiency(EstimatorSpec::s(RhoSpec::biweight(1.0), b)); };
      lo = 1e-3;
      hi = 0.5;
      break;
    }
    case TuneKind::SConsistency:
      break;
  }
  const double e_lo = eff_of(lo);
  const double e_hi = eff_of(hi);
  const double a = std::min(e_lo, e_hi);
  const double z = std::max(e_lo, e_hi);
  if (!(req.target_eff > a && req.target_eff < z)) {
    std::ostringstream msg;
    msg << "target efficiency " << req.target_eff << " outside attainable (" << a << ", " << z << ")";
    throw RangeError(msg.str(), a, z);
  }
  const double x = find_root([&](double t) { return eff_of(t) - req.target_eff; }, lo, hi, kTune);
  return {value_of(x), eff_of(x)};
}

std::vector<NamedEstimator> reference_rows() {
  const RhoSpec k1 = RhoSpec::biweight(1.56);
  const RhoSpec k2 = RhoSpec::biweight(4.68);
  const double b95 = GFunction(k2, Model::Gaussian).g(1.0);
  return {
      {"S95", EstimatorSpec::s(k2, b95)},
      {"MM95", EstimatorSpec::mm(k1, k2, 0.5)},
      {"CM95", EstimatorSpec::cm(k1, 0.5, 4.835)},
      {"CM61", EstimatorSpec::cm(k1, 0.5, 2.568)},
      {"S28", EstimatorSpec::s(k1, 0.5)},
  };
}

std::vector<AvarCell> avar_cells(const std::vector<NamedEstimator>& rows,
                                  const std::vector<LawKind>& laws) {
  std::vector<AvarCell> cells;
  for (const auto& row : rows) {
    for (LawKind law : laws) {
      AvarCell cell{row.label, law, std::nan(""), false, {}};
      try {
        const auto rep = evaluate_efficiency(row.spec, law);
        cell.avar = rep.avar;
        cell.binding = row.spec.kind == EstimatorKind::CM && rep.constraint_binding;
        const RhoSpec& psi_rho = row.spec.kind == EstimatorKind::MM ? row.spec.rho2 : row.spec.rho;
        const double ratio = psi_prime_cancellation(psi_rho, rep.model_scale, error_law(law));
        if (ratio < kNearDegenerate) {
          std::ostringstream msg;
          msg << "near-degenerate: |E psi'| / E|psi'| = " << ratio;
          cell.flag = msg.str();
        }
      } catch (const NumericalError& e) {
        cell.flag = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace maxbias
