#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pgk/complexity.hpp"

using namespace pgk;

TEST_CASE("eta and C") {
  CHECK(eta_lipschitz(0.1, 1.0) == doctest::Approx(0.025));
  CHECK(eta_lipschitz(0.2, 2.0) == doctest::Approx(0.025));
  CHECK(eta_lipschitz(0.4, 1.0) == doctest::Approx(2.0 * eta_lipschitz(0.2, 1.0)));
  CHECK(c_const(2, 2.0, 0.025) == doctest::Approx(5187.6).epsilon(1e-4));
  CHECK(c_const(2, 2.0, 0.0125) == doctest::Approx(4.0 * c_const(2, 2.0, 0.025)));
  const double pi = std::numbers::pi;
  CHECK(c_const(1, 2.0 * pi, pi) == doctest::Approx(16.0 / (pi * pi)));
  CHECK_THROWS_AS(eta_lipschitz(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(c_const(1, 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("lambda_min") {
  CHECK(lambda_min(2.0, 10.0, 1, 0.1) == 800);
  CHECK(lambda_min(2.0, 10.0, 1, 0.05) > lambda_min(2.0, 10.0, 1, 0.1));
  // m = 2: ceil(sqrt(4 B C^2 / eps)).
  CHECK(lambda_min(2.0, 10.0, 2, 0.1) == static_cast<long long>(std::ceil(std::sqrt(8000.0))));
  CHECK_THROWS_AS(lambda_min(2.0, 10.0, 0, 0.1), std::invalid_argument);
}

TEST_CASE("budget validation") {
  ComplexityBudget b;
  CHECK_NOTHROW(b.validate());
  b.delta = 1.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.delta = 0.05;
  b.M = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.M = 1;
  b.k = -1.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b.k = 1.0;
  b.epsilon = 0.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("comparison configuration arithmetic") {
  const ComplexityBudget b = ComplexityBudget::comparison();
  CHECK(b.m == 2);
  CHECK(b.B == 100.0);
  CHECK(b.log_term() == 1.0);
  CHECK(b.eta() == doctest::Approx(0.025));

  const BigReal nf = n_fejer(b);
  CHECK(nf.value == doctest::Approx(2.3e28).epsilon(0.02));
  CHECK(nf.log10 == doctest::Approx(std::log10(nf.value)));
  CHECK(c_gaussian(b) == doctest::Approx(3.38e4).epsilon(0.01));
  CHECK(n_gaussian(b).value == doctest::Approx(2.3e15).epsilon(0.02));
  CHECK(n_prior(b).log10 == doctest::Approx(75.9).epsilon(1e-3));

  const double rf = compare_ratio(b, KernelKind::Fejer).log10;
  const double rg = compare_ratio(b, KernelKind::GaussianPeriodic).log10;
  CHECK(std::abs(rf + 48.0) <= 2.0);
  CHECK(std::abs(rg + 61.0) <= 2.0);
  CHECK_THROWS_AS(compare_ratio(b, KernelKind::Dirichlet), std::invalid_argument);
}

TEST_CASE("scaling laws") {
  ComplexityBudget b = ComplexityBudget::comparison();
  const double base = n_fejer(b).log10;

  SUBCASE("B^4") {
    b.B *= 2.0;
    CHECK(n_fejer(b).log10 - base == doctest::Approx(std::log10(16.0)));
  }
  SUBCASE("eps^-12 at m = 2, k = 1") {
    b.epsilon /= 2.0;
    CHECK(n_fejer(b).log10 - base == doctest::Approx(12.0 * std::log10(2.0)));
  }
  SUBCASE("multi-function bound") {
    ComplexityBudget c;
    c.M = 1;
    CHECK(n_fejer_multi(c).log10 == doctest::Approx(n_fejer(c).log10));
    c.M = 1 << 10;
    const double ratio = std::pow(10.0, n_fejer_multi(c).log10 - n_fejer(c).log10);
    CHECK(ratio == doctest::Approx(std::log(2.0 * c.M / c.delta) / std::log(2.0 / c.delta)));
    c.M = 1 << 20;
    CHECK(n_fejer_multi(c).log10 - n_fejer(c).log10 < 1.0);
  }
  SUBCASE("monotone in epsilon and delta") {
    ComplexityBudget c;
    c.log_factor.reset();
    double prev = n_fejer(c).log10;
    for (double d : {0.02, 0.01, 0.001}) {
      c.delta = d;
      CHECK(n_fejer(c).log10 > prev);
      prev = n_fejer(c).log10;
    }
  }
  SUBCASE("prior bound blows up") {
    ComplexityBudget c = ComplexityBudget::comparison();
    double prev_gap = 0.0;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
      c.epsilon = eps;
      const double gap = n_prior(c).log10 - n_prior([&] { auto d = c; d.epsilon = 2 * eps; return d; }()).log10;
      CHECK(gap > prev_gap);
      prev_gap = gap;
    }
    c.m = 0;
    c.epsilon = 0.1;
    CHECK(n_prior(c).log10 == doctest::Approx(std::log10(1e4 / 0.01)));
  }
  SUBCASE("ratio below 1 once eps is small enough") {
    ComplexityBudget c = ComplexityBudget::comparison();
    // Fejer crosses 1 near eps = 0.188: 10^{24.75} vs 10^{22.87} at eps = 0.2.
    c.epsilon = 0.2;
    CHECK(compare_ratio(c, KernelKind::Fejer).log10 == doctest::Approx(1.88).epsilon(0.01));
    CHECK(compare_ratio(c, KernelKind::GaussianPeriodic).log10 < 0.0);
    for (double eps = 0.18; eps >= 0.01; eps *= 0.8) {
      c.epsilon = eps;
      CHECK(compare_ratio(c, KernelKind::Fejer).log10 < 0.0);
      CHECK(compare_ratio(c, KernelKind::GaussianPeriodic).log10 < 0.0);
    }
  }
}

TEST_CASE("gaussian bound requires m >= 2") {
  ComplexityBudget b;
  b.m = 1;
  CHECK_THROWS_AS(n_gaussian(b), std::invalid_argument);
}

TEST_CASE("overflow is reported through log10") {
  ComplexityBudget b = ComplexityBudget::comparison();
  b.epsilon = 0.01;
  const BigReal p = n_prior(b);
  CHECK(p.log10 > 308.0);
  CHECK(std::isinf(p.value));
  CHECK(BigReal::from_log10(2.0).value == doctest::Approx(100.0));
}

TEST_CASE("pointwise sample size") {
  const double n = n_pointwise(2.0, 20, 1, 0.2, 0.1);
  CHECK(n == doctest::Approx(2.0 * 4.0 * 400.0 / 0.04 * std::log(20.0)));
}
