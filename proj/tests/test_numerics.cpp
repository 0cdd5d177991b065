#include "maxbias/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace maxbias;

TEST_CASE("integrate: simple integrands") {
  CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate(oracle::normal_pdf, -kInf, kInf) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate(oracle::normal_pdf, 1.0, kInf) == doctest::Approx(oracle::normal_upper(1.0)).epsilon(1e-10));
  CHECK(integrate(oracle::cauchy_pdf, -kInf, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("integrate: rejects empty interval and bad tolerance") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, {0.0, 1e-10, 10}), DomainError);
}

TEST_CASE("integrate: non-convergence raises") {
  Tolerance tight{1e-300, 1e-300, 3};
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight), NumericalError);
}

TEST_CASE("integrate: additivity on random smooth integrands") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double p = u(rng), q = u(rng), r = u(rng);
    auto f = [&](double x) { return std::exp(p * x) * std::cos(q * x) + r * x * x; };
    const double a = -1.0, b = u(rng) * 0.4, c = 1.5;
    const double whole = integrate(f, a, c);
    const double split = integrate(f, a, b) + integrate(f, b, c);
    CHECK(std::abs(whole - split) <= 10.0 * 1e-10 * std::max(1.0, std::abs(whole)));
  }
}

TEST_CASE("find_root: examples") {
  CHECK(find_root([](double x) { return x - 2.0; }, 0.0, 5.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // median of |Z|: 2 (1 - Phi(s)) = 0.5
  const double s = find_root([](double x) { return 2.0 * oracle::normal_upper(x) - 0.5; }, 0.1, 3.0);
  CHECK(s == doctest::Approx(0.6744897501960817).epsilon(1e-10));
}

TEST_CASE("find_root: bracket and tolerance errors") {
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
  CHECK_THROWS_AS(find_root([](double x) { return x; }, -1.0, 1.0, {1e-10, 1e-10, 0}), DomainError);
}

TEST_CASE("find_root: random monotone functions") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int rep = 0; rep < 30; ++rep) {
    const double a = u(rng), t = u(rng) - 1.5;
    auto f = [&](double x) { return std::tanh(a * (x - t)) + 0.1 * (x - t); };
    const double x = find_root(f, -5.0, 5.0);
    CHECK(std::abs(f(x)) <= 1e-9);
    CHECK(x == doctest::Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("maximize_unimodal: examples") {
  auto e = maximize_unimodal([](double x) { return -(x - 3.0) * (x - 3.0); }, 0.0, 10.0);
  CHECK(e.x == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(std::abs(e.value) < 1e-12);
  auto n = maximize_unimodal([](double x) { return 2.0 * x * oracle::normal_pdf(x); }, 1e-12, 10.0);
  CHECK(n.x == doctest::Approx(1.0).epsilon(1e-7));
  auto flat = maximize_unimodal([](double) { return 4.0; }, 0.0, 2.0);
  CHECK(flat.value == 4.0);
  CHECK(flat.x == doctest::Approx(1.0));
}

TEST_CASE("maximize_unimodal: agrees with a dense grid") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double m = 0.5 + 4.0 * u(rng), w = 0.2 + u(rng), p = 1.2 + 2.0 * u(rng);
    auto f = [&](double x) { return 1.0 - w * std::pow(std::abs(x - m), p); };
    const auto e = maximize_unimodal(f, 0.0, 5.0);
    constexpr int n = 100001;
    double best_x = 0.0, best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double x = 5.0 * i / (n - 1);
      if (f(x) > best) {
        best = f(x);
        best_x = x;
      }
    }
    CHECK(std::abs(e.x - best_x) <= 5.0 / (n - 1) + 1e-6);
    CHECK(e.value >= best - 1e-12);
  }
}
