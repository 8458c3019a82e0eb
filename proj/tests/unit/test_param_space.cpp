#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pgk/numeric.hpp"
#include "pgk/param_space.hpp"

using namespace pgk;

namespace {

double cos_density(double x, double L) {
  return (1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x / L)) / L;
}

// chi^2 statistic on `bins` equal cells against expected cell probabilities.
double chi_square(const std::vector<ParamPoint>& pts, double L, int bins,
                  const std::function<double(double, double)>& cell_prob) {
  std::vector<double> counts(bins, 0.0);
  for (const auto& p : pts) {
    int b = static_cast<int>((p[0] + L / 2) / L * bins);
    counts[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  double chi = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -L / 2 + b * L / bins;
    const double e = cell_prob(lo, lo + L / bins) * pts.size();
    chi += (counts[b] - e) * (counts[b] - e) / e;
  }
  return chi;
}

}  // namespace

TEST_CASE("wrap maps into the half-open box") {
  ParamSpace s1(1, 2.0);
  CHECK(wrap(std::vector<double>{0.3}, s1)[0] == doctest::Approx(0.3));
  CHECK(wrap(std::vector<double>{1.0}, s1)[0] == doctest::Approx(-1.0));
  ParamSpace s2(2, 2.0);
  const ParamPoint p = wrap(std::vector<double>{2.3, -3.0}, s2);
  CHECK(p[0] == doctest::Approx(0.3));
  CHECK(p[1] == doctest::Approx(-1.0));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double raw = rng.uniform(-50.0, 50.0);
    const double w = wrap_coordinate(raw, 2.0);
    CHECK(w >= -1.0);
    CHECK(w < 1.0);
    const double k = (raw - w) / 2.0;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("torus distance") {
  ParamSpace s1(1, 2.0);
  ParamSpace s2(2, 2.0);
  CHECK(torus_distance(ParamPoint{{0.4}}, ParamPoint{{0.4}}, s1) == 0.0);
  CHECK(torus_distance(ParamPoint{{0.9}}, ParamPoint{{-0.9}}, s1) == doctest::Approx(0.2));
  CHECK(torus_distance(ParamPoint{{0.0, 0.0}}, ParamPoint{{0.3, 0.4}}, s2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(torus_distance(ParamPoint{{0.0}}, ParamPoint{{0.3, 0.4}}, s2), std::invalid_argument);

  SUBCASE("symmetric and triangle inequality on random triples") {
    const auto pts = sample(s2, 300, 11);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
      const double ab = torus_distance(pts[i], pts[i + 1], s2);
      const double bc = torus_distance(pts[i + 1], pts[i + 2], s2);
      const double ac = torus_distance(pts[i], pts[i + 2], s2);
      CHECK(ab == doctest::Approx(torus_distance(pts[i + 1], pts[i], s2)));
      CHECK(ac <= ab + bc + 1e-12);
    }
  }
}

TEST_CASE("uniform sampling statistics") {
  ParamSpace s(1, 2.0);
  const std::size_t n = 100000;
  const auto pts = sample(s, n, 42);
  REQUIRE(pts.size() == n);

  double mean = 0.0;
  for (const auto& p : pts) mean += p[0];
  mean /= n;
  const double sigma = 2.0 / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean) < 3.0 * sigma);

  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = (xs[i] + 1.0) / 2.0;
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n),
                   std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));

  const double chi = chi_square(pts, 2.0, 20, [](double a, double b) { return (b - a) / 2.0; });
  CHECK(chi < 36.19);
}

TEST_CASE("sampling is deterministic in the seed") {
  ParamSpace s(2, 3.0);
  CHECK(sample(s, 500, 9) == sample(s, 500, 9));
  CHECK_FALSE(sample(s, 500, 9) == sample(s, 500, 10));
  CHECK_THROWS_AS(sample(s, 0, 1), std::invalid_argument);
}

TEST_CASE("non-uniform densities respect chi-square at 1%") {
  const double L = 2.0;
  auto cell = [L](double a, double b) {
    return (b - a) / L + 0.5 / (2.0 * std::numbers::pi) *
                             (std::sin(2.0 * std::numbers::pi * b / L) -
                              std::sin(2.0 * std::numbers::pi * a / L));
  };
  SUBCASE("product form (inverse CDF)") {
    ParamSpace s(1, L, Density::product({[L](double x) { return cos_density(x, L); }}));
    CHECK(chi_square(sample(s, 50000, 3), L, 20, cell) < 36.19);
  }
  SUBCASE("general form (rejection)") {
    ParamSpace s(1, L, Density::general([L](std::span<const double> x) { return cos_density(x[0], L); }));
    CHECK(s.envelope() >= 1.5);
    CHECK(chi_square(sample(s, 50000, 4), L, 20, cell) < 36.19);
  }
}

TEST_CASE("invalid densities are rejected") {
  CHECK_THROWS_AS(ParamSpace(1, 2.0, Density::general([](std::span<const double>) { return 0.7; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParamSpace(1, 2.0, Density::product({[](double x) { return x; }})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParamSpace(0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ParamSpace(1, -1.0), std::invalid_argument);
  ParamSpace ok(2, 2.0);
  CHECK(ok.normalization() == doctest::Approx(1.0));
}

TEST_CASE("grid lattice") {
  ParamSpace s1(1, 2.0);
  const auto g1 = grid(s1, 4);
  REQUIRE(g1.size() == 4);
  CHECK(g1.front()[0] == doctest::Approx(-0.75));
  CHECK(g1.back()[0] == doctest::Approx(0.75));
  for (std::size_t i = 1; i < g1.size(); ++i) CHECK(g1[i][0] - g1[i - 1][0] == doctest::Approx(0.5));

  ParamSpace s2(2, 2.0);
  const auto g2 = grid(s2, 3);
  CHECK(g2.size() == 9);
  CHECK(g2[1][1] - g2[0][1] == doctest::Approx(2.0 / 3));
  CHECK(g2[0][0] == g2[1][0]);

  CHECK_THROWS_AS(grid(s1, 1), std::invalid_argument);
  CHECK_THROWS_AS(grid(ParamSpace(3, 1.0), 1000), std::length_error);
}

TEST_CASE("seed derivation and compensated sums") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0));
}
