#include "maxbias/efficiency.hpp"

#include <doctest.h>

#include <cmath>

using namespace maxbias;

namespace {

const AvarCell& cell(const std::vector<AvarCell>& cells, const std::string& est, LawKind law) {
  for (const auto& c : cells) {
    if (c.estimator == est && c.law == law) return c;
  }
  FAIL("missing cell");
  return cells.front();
}

}  // namespace

TEST_CASE("error laws have the normal interquartile range") {
  for (LawKind k : all_laws()) {
    const auto law = error_law(k);
    CAPTURE(law_label(k));
    CHECK(std::abs(law.quantile(0.75) - law.quantile(0.25) - 1.3490) <= 1e-3);
    CHECK(law.quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(law.cdf(-1.0) == doctest::Approx(1.0 - law.cdf(1.0)).epsilon(1e-12));
    CHECK(expect_symmetric(law, [](double) { return 1.0; }, kInf) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("m_avar: anchor values") {
  const auto norm = error_law(LawKind::Norm);
  CHECK(m_avar(RhoSpec::biweight(4.68), 1.0, norm) == doctest::Approx(1.053).epsilon(0.005 / 1.053));
  // The S28 residual scale is g^{-1}(0.5) for k = 1.56; equivalently k = consistency_k(0.5) at scale 1.
  const GFunction g156(RhoSpec::biweight(1.56), norm);
  CHECK(m_avar(RhoSpec::biweight(1.56), s_scale_at_law(g156, 0.5), norm) == doctest::Approx(3.484).epsilon(0.02 / 3.484));
  CHECK(m_avar(RhoSpec::biweight(consistency_k(0.5)), 1.0, norm) == doctest::Approx(3.484).epsilon(0.02 / 3.484));
  const auto mm = evaluate_efficiency(EstimatorSpec::mm(RhoSpec::biweight(1.56), RhoSpec::biweight(4.68), 0.5),
                                      LawKind::Cauchy);
  CHECK(mm.avar == doctest::Approx(1.312).epsilon(0.05 / 1.312));
  CHECK_FALSE(mm.gaussian_efficiency.has_value());
}

TEST_CASE("m_avar: invariant to the psi normalization") {
  for (LawKind k : {LawKind::Norm, LawKind::Cauchy, LawKind::Slash}) {
    const auto law = error_law(k);
    const double base = m_avar(RhoSpec::biweight(4.68), 1.1, law);
    for (double f : {0.5, 2.0, 6.0 / (4.68 * 4.68)}) {
      CHECK(m_avar_scaled_psi(RhoSpec::biweight(4.68), 1.1, law, f) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("m_avar: degenerate and unsupported inputs") {
  // psi' of the unit biweight integrates to (1 - a^2)^2 against U(-a, a); zero at a = 1
  SymmetricLaw unif{LawKind::Uniform, 1.0};
  CHECK_THROWS_AS(m_avar(RhoSpec::biweight(1.0), 1.0, unif), DegenerateEfficiency);
  CHECK_THROWS_AS(m_avar(RhoSpec::alpha_quantile(), 1.0, error_law(LawKind::Norm)), UnsupportedOperation);
  CHECK_THROWS_AS(m_avar(RhoSpec::biweight(1.0), 0.0, unif), DomainError);
}

TEST_CASE("s_scale_at_law") {
  const GFunction g156(RhoSpec::biweight(1.56), error_law(LawKind::Norm));
  const double s = s_scale_at_law(g156, 0.5);
  CHECK(s == doctest::Approx(1.0).epsilon(0.01));
  CHECK(g156.g(s) == doctest::Approx(0.5).epsilon(1e-8));
  const GFunction g468(RhoSpec::biweight(4.68), error_law(LawKind::Norm));
  CHECK(s_scale_at_law(g468, 0.12) == doctest::Approx(1.0).epsilon(0.02));
  for (LawKind k : all_laws()) {
    const GFunction gf(RhoSpec::biweight(1.56), error_law(k));
    CHECK(gf.g(s_scale_at_law(gf, 0.5)) == doctest::Approx(0.5).epsilon(1e-8));
  }
  CHECK_THROWS_AS(s_scale_at_law(g156, 1.0), DomainError);
}

TEST_CASE("cm_model_scale: binding rule") {
  const GFunction cau(RhoSpec::biweight(1.56), error_law(LawKind::Cauchy));
  const auto cb = cm_model_scale(cau, 0.5, 2.568);
  CHECK(cb.binding);
  CHECK(cb.scale == doctest::Approx(s_scale_at_law(cau, 0.5)));

  const GFunction norm(RhoSpec::biweight(1.56), error_law(LawKind::Norm));
  const auto nb = cm_model_scale(norm, 0.5, 2.568);
  CHECK_FALSE(nb.binding);
  CHECK(norm.g(nb.scale) < 0.5);
  CHECK(norm.phi(nb.scale) == doctest::Approx(1.0 / 2.568).epsilon(1e-8));
  CHECK(nb.scale >= norm.peak().sigma_m);

  const auto low = cm_model_scale(norm, 0.5, 0.9 / norm.peak().k);
  CHECK(low.binding);
}

TEST_CASE("gaussian_efficiency: anchor values") {
  const auto k1 = RhoSpec::biweight(1.56), k2 = RhoSpec::biweight(4.68);
  CHECK(gaussian_efficiency(EstimatorSpec::mm(k1, k2, 0.5)) == doctest::Approx(0.95).epsilon(0.005 / 0.95));
  CHECK(gaussian_efficiency(EstimatorSpec::s(k1, 0.5)) == doctest::Approx(0.287).epsilon(0.005 / 0.287));
  CHECK(gaussian_efficiency(EstimatorSpec::cm(k1, 0.5, 4.835)) == doctest::Approx(0.95).epsilon(0.005 / 0.95));
  CHECK(gaussian_efficiency(EstimatorSpec::cm(k1, 0.5, 2.568)) == doctest::Approx(0.611).epsilon(0.005 / 0.611));
  CHECK_THROWS_AS(gaussian_efficiency(EstimatorSpec::s(RhoSpec::alpha_quantile(), 0.5)), UnsupportedOperation);
}

TEST_CASE("gaussian_efficiency: monotone in k2 and c, and tends to 1") {
  const auto k1 = RhoSpec::biweight(1.56);
  double prev = 0.0;
  for (double k2 : {2.0, 3.0, 4.0, 4.68, 6.0, 10.0}) {
    const double e = gaussian_efficiency(EstimatorSpec::mm(k1, RhoSpec::biweight(k2), 0.5));
    CHECK(e > prev);
    CHECK(e <= 1.0);
    prev = e;
  }
  prev = 0.0;
  for (double c : {2.6, 3.0, 4.0, 4.835, 8.0, 20.0}) {
    const double e = gaussian_efficiency(EstimatorSpec::cm(k1, 0.5, c));
    CHECK(e > prev);
    prev = e;
  }
  CHECK(gaussian_efficiency(EstimatorSpec::mm(k1, RhoSpec::biweight(100.0), 0.5)) > 0.999);
}

TEST_CASE("efficiency does not depend on the biweight scale for S and CM") {
  const double s1 = gaussian_efficiency(EstimatorSpec::s(RhoSpec::biweight(1.0), 0.5));
  const double s2 = gaussian_efficiency(EstimatorSpec::s(RhoSpec::biweight(3.0), 0.5));
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-8));
  const double c1 = gaussian_efficiency(EstimatorSpec::cm(RhoSpec::biweight(1.0), 0.5, 4.0));
  const double c2 = gaussian_efficiency(EstimatorSpec::cm(RhoSpec::biweight(3.0), 0.5, 4.0));
  CHECK(c1 == doctest::Approx(c2).epsilon(1e-8));
}

TEST_CASE("tune: tuning constants") {
  const auto mm = tune({TuneKind::MmK2, 0.5, 0.95, std::nullopt});
  CHECK(mm.value == doctest::Approx(4.68).epsilon(0.02 / 4.68));
  CHECK(std::abs(mm.achieved_eff - 0.95) <= 1e-4);
  const auto cm = tune({TuneKind::CmC, 0.5, 0.95, std::nullopt});
  CHECK(cm.value == doctest::Approx(4.835).epsilon(0.02 / 4.835));
  CHECK(std::abs(cm.achieved_eff - 0.95) <= 1e-4);
  const auto cm61 = tune({TuneKind::CmC, 0.5, 0.611, std::nullopt});
  CHECK(cm61.value == doctest::Approx(2.568).epsilon(0.02 / 2.568));
  const auto sb = tune({TuneKind::SBreakdown, 0.5, 0.95, std::nullopt});
  CHECK(sb.value == doctest::Approx(0.12).epsilon(0.005 / 0.12));
  CHECK(std::abs(sb.achieved_eff - 0.95) <= 1e-4);
  const auto sk = tune({TuneKind::SConsistency, 0.5, 0.0, std::nullopt});
  CHECK(sk.value == doctest::Approx(consistency_k(0.5)));
}

TEST_CASE("tune: unreachable targets report the attainable range") {
  try {
    tune({TuneKind::CmC, 0.5, 1.2, std::nullopt});
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(e.attainable_lo == doctest::Approx(0.2868).epsilon(1e-3));
    CHECK(e.attainable_hi <= 1.0);
    CHECK(e.attainable_hi > 0.99);
  }
  CHECK_THROWS_AS(tune({TuneKind::CmC, 0.5, 0.2, std::nullopt}), RangeError);
  CHECK_THROWS_AS(tune({TuneKind::MmK2, 0.5, 1.0, std::nullopt}), RangeError);
}

TEST_CASE("avar_cells: reference cells") {
  const auto cells = avar_cells(reference_rows(), all_laws());
  CHECK(cells.size() == 35);
  CHECK(cell(cells, "S95", LawKind::Norm).avar == doctest::Approx(1.053).epsilon(0.005 / 1.053));
  CHECK(cell(cells, "MM95", LawKind::Norm).avar == doctest::Approx(1.053).epsilon(0.005 / 1.053));
  CHECK(cell(cells, "MM95", LawKind::DoubleExp).avar == doctest::Approx(1.368).epsilon(0.05 / 1.368));
  CHECK(cell(cells, "S28", LawKind::Norm).avar == doctest::Approx(3.484).epsilon(0.02 / 3.484));
  const auto& sl = cell(cells, "CM61", LawKind::Slash);
  CHECK(sl.avar == doctest::Approx(1.330).epsilon(0.05 / 1.330));
  CHECK(sl.binding);
  CHECK_FALSE(cell(cells, "CM61", LawKind::Norm).binding);
  CHECK(cell(cells, "CM61", LawKind::Norm).avar == doctest::Approx(1.637).epsilon(0.05 / 1.637));
  const auto& unif = cell(cells, "S28", LawKind::Uniform);
  CHECK(unif.avar == doctest::Approx(120.336).epsilon(0.01));
  CHECK(unif.flag.find("near-degenerate") != std::string::npos);
  for (const auto& c : cells) {
    if (c.estimator == "CM61" || c.estimator == "CM95") {
      if (c.binding) {
        CHECK(c.avar == doctest::Approx(cell(cells, "S28", c.law).avar).epsilon(1e-6));
      }
    } else {
      CHECK_FALSE(c.binding);
    }
    if (!(c.estimator == "S28" && c.law == LawKind::Uniform)) CHECK(c.flag.empty());
  }
}
