#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pgk/kernels.hpp"
#include "pgk/numeric.hpp"

using namespace pgk;

namespace {

constexpr double kPi = std::numbers::pi;

ParamSpace cos_space(double L) {
  return ParamSpace(1, L, Density::product({[L](double x) {
                      return (1.0 + 0.5 * std::cos(2.0 * kPi * x / L)) / L;
                    }}));
}

}  // namespace

TEST_CASE("fejer closed form") {
  ParamSpace s1(1, 1.0);
  CHECK(eval_fejer(ParamPoint{{0.25}}, 2, s1) == doctest::Approx(1.0));
  for (int m : {1, 2, 3}) {
    ParamSpace s(m, 2.0);
    for (int lam : {1, 3, 50}) {
      CHECK(eval_fejer(ParamPoint{std::vector<double>(m, 0.0)}, lam, s) ==
            doctest::Approx(std::pow(lam, m)));
    }
  }
  // Near the origin the series branch joins the closed form smoothly.
  ParamSpace s(1, 2.0);
  const double inside = eval_fejer(ParamPoint{{1e-9}}, 50, s);
  const double outside = eval_fejer(ParamPoint{{1e-7}}, 50, s);
  CHECK(inside <= 50.0);
  CHECK(std::abs(inside - outside) < 1e-6);
}

TEST_CASE("fejer symmetry, periodicity, bounds") {
  ParamSpace s(2, 2.0);
  const KernelSpec k = KernelSpec::fejer(s, 17);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    const double v = k(ParamPoint{{a, b}});
    CHECK(v >= 0.0);
    CHECK(v <= 17.0 * 17.0);
    CHECK(v == doctest::Approx(k(ParamPoint{{-a, -b}})).epsilon(1e-12));
    CHECK(v == doctest::Approx(k(ParamPoint{{a + 2.0, b}})).epsilon(1e-9));
  }
}

TEST_CASE("fejer is the mean of dirichlet kernels") {
  ParamSpace s(1, 2.0);
  Rng rng(77);
  for (int lam : {1, 5, 50}) {
    for (int i = 0; i < 1000; ++i) {
      const ParamPoint x{{rng.uniform(-1.0, 1.0)}};
      double mean = 0.0;
      for (int n = 0; n < lam; ++n) mean += eval_dirichlet_1d(x, n, s);
      mean /= lam;
      CHECK(std::abs(mean - eval_fejer(x, lam, s)) <= 1e-10);
    }
  }
}

TEST_CASE("dirichlet kernel") {
  ParamSpace s(1, 2.0);
  CHECK(eval_dirichlet_1d(ParamPoint{{0.0}}, 3, s) == doctest::Approx(7.0));
  CHECK(eval_dirichlet_1d(ParamPoint{{1.0}}, 1, s) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(KernelSpec::dirichlet(ParamSpace(2, 2.0), 4), std::invalid_argument);
  CHECK_FALSE(KernelSpec::dirichlet(s, 4).is_positive());

  SUBCASE("L1 norm grows like log lambda") {
    std::vector<double> logs, norms;
    double prev = 0.0;
    for (int lam : {8, 16, 32, 64, 128}) {
      const double v = dirichlet_l1_norm(lam, s, 1 << 16);
      CHECK(v > prev);
      prev = v;
      logs.push_back(std::log(lam));
      norms.push_back(v);
    }
    // Least-squares c in norm ~ a + c log(lambda).
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) { mx += logs[i]; my += norms[i]; }
    mx /= logs.size();
    my /= logs.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      sxy += (logs[i] - mx) * (norms[i] - my);
      sxx += (logs[i] - mx) * (logs[i] - mx);
    }
    const double c = sxy / sxx;
    CHECK(c > 0.0);
    for (std::size_t i = 0; i < logs.size(); ++i) CHECK(norms[i] >= 0.5 * c * logs[i]);
  }
}

TEST_CASE("periodized gaussian") {
  ParamSpace s(1, 2.0);
  const double expected = 2.0 / std::sqrt(kPi * 0.1) * (1.0 + 2.0 * std::exp(-40.0));
  CHECK(eval_gaussian(ParamPoint{{0.0}}, 0.1, s) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(eval_gaussian(ParamPoint{{0.0}}, 0.1, s) == doctest::Approx(3.568).epsilon(1e-3));
  const KernelSpec g = KernelSpec::gaussian(s, 0.1);
  CompensatedSum mean;
  for (const auto& x : grid(s, 10000)) mean.add(g(x) / 10000.0);
  CHECK(std::abs(mean.value() - 1.0) <= 1e-4);
  CHECK(g(ParamPoint{{0.37}}) == doctest::Approx(g(ParamPoint{{-0.37}})));
  CHECK_THROWS_AS(KernelSpec::gaussian(s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::gaussian(s, 0.0), std::invalid_argument);
}

TEST_CASE("weighted kernel") {
  ParamSpace uni(1, 2.0);
  const KernelSpec f = KernelSpec::fejer(uni, 9);
  const KernelSpec w = KernelSpec::weighted(f);
  for (double x : {-0.9, -0.3, 0.0, 0.41}) {
    CHECK(eval_weighted(ParamPoint{{x}}, w) == doctest::Approx(f(ParamPoint{{x}})));
  }

  const ParamSpace cs = cos_space(2.0);
  const KernelSpec wc = KernelSpec::weighted(KernelSpec::fejer(cs, 9));
  CompensatedSum integral;
  const int q = 20000;
  for (const auto& x : grid(cs, q)) {
    const double v = eval_weighted(x, wc);
    CHECK(v >= 0.0);
    integral.add(v * cs.density_at(x.coords) * 2.0 / q);
  }
  CHECK(integral.value() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(wc.is_positive());
}

TEST_CASE("verify_pgk") {
  ParamSpace s(1, 2.0);
  const std::vector<double> etas = {0.25, 0.5};

  SUBCASE("fejer lambda = 50 passes") {
    const PgkReport r = verify_pgk(KernelSpec::fejer(s, 50), etas, 16384);
    CHECK(r.passed);
    CHECK(r.min_value >= 0.0);
    CHECK(r.sup_value == doctest::Approx(50.0).epsilon(1e-3));
    CHECK(std::abs(r.normalization - 1.0) <= 1e-4);
    CHECK(r.fitted_tail_exponent >= 0.9);
    CHECK(r.fitted_sup_exponent == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("dirichlet lambda = 50 fails positivity") {
    const PgkReport r = verify_pgk(KernelSpec::dirichlet(s, 50), etas, 16384);
    CHECK_FALSE(r.passed);
    CHECK(r.min_value < 0.0);
  }
  SUBCASE("fejer tail halves at fixed eta") {
    const double eta[] = {0.1};
    ParamSpace big(1, 2.0);
    double prev = -1.0;
    for (int lam : {16, 32, 64, 128, 256}) {
      const PgkReport r = verify_pgk(KernelSpec::fejer(big, lam), eta, 1 << 15);
      const double tail = r.tail_integrals.front().second;
      if (prev > 0.0) CHECK(tail / prev <= 0.75);
      prev = tail;
    }
  }
  SUBCASE("gaussian passes for h in [0.01, 0.2] L") {
    for (double rel : {0.01, 0.05, 0.2}) {
      const PgkReport r = verify_pgk(KernelSpec::gaussian(s, rel * 2.0), etas, 16384);
      CHECK(r.passed);
    }
  }
  SUBCASE("budget and eta guards") {
    const double bad[] = {3.0};
    CHECK_THROWS_AS(verify_pgk(KernelSpec::fejer(s, 5), bad, 100), std::invalid_argument);
    const double ok[] = {0.5};
    CHECK_THROWS_AS(verify_pgk(KernelSpec::fejer(ParamSpace(4, 2.0), 5), ok, 10), std::length_error);
  }
}

TEST_CASE("convolution by quadrature") {
  ParamSpace s(1, 2.0);
  const KernelSpec k = KernelSpec::fejer(s, 10);
  CHECK(convolve_quadrature([](const ParamPoint&) { return 3.5; }, k, ParamPoint{{0.2}}, 4096) ==
        doctest::Approx(3.5).epsilon(1e-6));

  for (int lam : {10, 50}) {
    const KernelSpec kl = KernelSpec::fejer(s, lam);
    for (double x : {-0.7, 0.0, 0.33}) {
      const double got = convolve_quadrature(
          [](const ParamPoint& y) { return std::cos(kPi * y[0]); }, kl, ParamPoint{{x}}, 8192);
      CHECK(std::abs(got - (1.0 - 1.0 / lam) * std::cos(kPi * x)) <= 1e-4);
    }
  }

  SUBCASE("approximation error of a Lipschitz function decreases with lambda") {
    const ScalarField f = [](const ParamPoint& y) { return std::abs(y[0]); };
    double prev = 1e9;
    for (int lam : {8, 16, 32, 64}) {
      const KernelSpec kl = KernelSpec::fejer(s, lam);
      double worst = 0.0;
      for (double x : {-0.5, 0.0, 0.25, 0.999}) {
        worst = std::max(worst, std::abs(convolve_quadrature(f, kl, ParamPoint{{x}}, 8192) - std::abs(x)));
      }
      CHECK(worst < prev);
      prev = worst;
    }
  }

  SUBCASE("bounded by sup |f| for positive kernels") {
    ParamSpace s2(2, 2.0);
    const KernelSpec k2 = KernelSpec::fejer(s2, 6);
    const ScalarField f = [](const ParamPoint& y) { return std::sin(3 * y[0]) * std::cos(5 * y[1]); };
    for (double x : {-0.8, 0.1, 0.6}) {
      CHECK(std::abs(convolve_quadrature(f, k2, ParamPoint{{x, -x}}, 256)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("rescaled kernels") {
  ParamSpace s(1, 2.0);
  CHECK(KernelSpec::fejer(s, 8).rescaled(4).lambda() == 32);
  const KernelSpec g = KernelSpec::gaussian(s, 0.04).rescaled(2);
  CHECK(g.bandwidth() == doctest::Approx(0.01));
  CHECK(g.effective_index() == doctest::Approx(10.0));
  CHECK(KernelSpec::fejer(ParamSpace(2, 2.0), 7).at_origin() == doctest::Approx(49.0));
}
