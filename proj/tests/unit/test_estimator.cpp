#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pgk/estimator.hpp"
#include "pgk/numeric.hpp"
#include "pgk/xy_model.hpp"

using namespace pgk;

namespace {

CMatrix random_density(int dim, Rng& rng) {
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  CMatrix r = a * a.adjoint();
  return r / r.trace().real();
}

TrainingSet random_density_set(const ParamSpace& s, std::size_t n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DensityMatrix> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(DensityMatrix::checked(random_density(dim, rng)));
  return TrainingSet::density(sample(s, n, seed), std::move(labels), seed);
}

double smooth(const ParamPoint& x) { return std::sin(std::numbers::pi * x[0]) + 0.5; }

}  // namespace

TEST_CASE("training set validation") {
  ParamSpace s(1, 2.0);
  auto pts = sample(s, 3, 1);
  CHECK_THROWS_AS(TrainingSet::scalar(pts, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(TrainingSet::scalar({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(TrainingSet::scalar(pts, {1.0, NAN, 2.0}), std::invalid_argument);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  std::vector<DensityMatrix> labels(3, DensityMatrix(bad));
  CHECK_THROWS_AS(TrainingSet::density(pts, labels), std::invalid_argument);
  const TrainingSet ok = TrainingSet::scalar(pts, {1.0, 2.0, 3.0}, 9);
  CHECK(ok.has_scalar_labels());
  CHECK(ok.seed() == 9);
  CHECK_THROWS(ok.density_labels());
}

TEST_CASE("single sample returns lambda^m rho at its own point") {
  for (int m : {1, 2}) {
    ParamSpace s(m, 2.0);
    Rng rng(3);
    const CMatrix rho = random_density(4, rng);
    const auto pts = sample(s, 1, 5);
    const TrainingSet set = TrainingSet::density(pts, {DensityMatrix::checked(rho)});
    const KernelSpec k = KernelSpec::fejer(s, 7);
    const CMatrix got = predict_density(pts[0], set, k);
    CHECK(linf_entry_norm(got, std::pow(7.0, m) * rho) <= 1e-10);
  }
}

TEST_CASE("prediction is linear in the labels") {
  ParamSpace s(1, 2.0);
  const auto pts = sample(s, 50, 2);
  std::vector<double> f(50), g(50), fg(50);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    f[i] = rng.uniform(-1, 1);
    g[i] = rng.uniform(-1, 1);
    fg[i] = 2.0 * f[i] - 3.0 * g[i];
  }
  const KernelSpec k = KernelSpec::fejer(s, 12);
  for (double x : {-0.9, 0.0, 0.4}) {
    const ParamPoint p{{x}};
    const double a = predict_scalar(p, TrainingSet::scalar(pts, f), k);
    const double b = predict_scalar(p, TrainingSet::scalar(pts, g), k);
    const double c = predict_scalar(p, TrainingSet::scalar(pts, fg), k);
    CHECK(std::abs(c - (2.0 * a - 3.0 * b)) <= 1e-10);
  }
}

TEST_CASE("sigma_N is Hermitian and PSD for PGK kernels") {
  for (int m : {1, 2}) {
    ParamSpace s(m, 2.0);
    const TrainingSet set = random_density_set(s, 200, 4, 10 + m);
    for (const KernelSpec& k : {KernelSpec::fejer(s, 9), KernelSpec::gaussian(s, 0.1)}) {
      if (k.kind() == KernelKind::GaussianPeriodic && m > 1) continue;
      for (const auto& x : sample(s, 20, 99)) {
        const CMatrix sig = predict_density(x, set, k);
        CHECK((sig - sig.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sig + sig.adjoint()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        CHECK(sig.trace().real() == doctest::Approx(trace_diagnostic(x, set, k)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("dirichlet kernel rejected for density prediction") {
  ParamSpace s(1, 2.0);
  const TrainingSet set = random_density_set(s, 20, 2, 7);
  const KernelSpec d = KernelSpec::dirichlet(s, 10);
  CHECK_THROWS_AS(predict_density(ParamPoint{{0.1}}, set, d), std::invalid_argument);
  PredictOptions opts;
  opts.allow_non_pgk = true;
  // Sign-indefinite weights can leave the PSD cone.
  double worst = 0.0;
  for (const auto& x : grid(s, 200)) {
    const CMatrix sig = predict_density(x, set, d, opts);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sig + sig.adjoint()));
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  CHECK(worst < 0.0);
}

TEST_CASE("prediction commutes with expectation values") {
  const int n = 3;
  ParamSpace s(1, 2.0);
  const auto pts = sample(s, 80, 21);
  std::vector<DensityMatrix> rhos;
  std::vector<double> energies;
  for (const auto& x : pts) {
    XYParams p;
    p.n = n;
    p.h_over_J = 1.5 + x[0];
    rhos.push_back(ground_state_ed(p).rho);
    energies.push_back(expectation(xy_observable(p), rhos.back()));
  }
  XYParams fixed;
  fixed.n = n;
  fixed.h_over_J = 0.7;
  const Observable obs = xy_observable(fixed);
  std::vector<double> obs_labels;
  for (const auto& r : rhos) obs_labels.push_back(expectation(obs, r));
  const TrainingSet dens = TrainingSet::density(pts, rhos);
  const TrainingSet scal = TrainingSet::scalar(pts, obs_labels);
  const KernelSpec k = KernelSpec::fejer(s, 15);
  for (double x : {-0.6, 0.2, 0.95}) {
    const ParamPoint p{{x}};
    CHECK(std::abs(expectation(obs, predict_density(p, dens, k)) - predict_scalar(p, scal, k)) <= 1e-10);
  }
}

TEST_CASE("renormalization divides by the trace diagnostic") {
  ParamSpace s(1, 2.0);
  const auto pts = sample(s, 100, 8);
  std::vector<double> ones(100, 1.0);
  const TrainingSet set = TrainingSet::scalar(pts, ones);
  const KernelSpec k = KernelSpec::fejer(s, 20);
  PredictOptions r;
  r.renormalize = true;
  for (double x : {-0.5, 0.3}) {
    CHECK(predict_scalar(ParamPoint{{x}}, set, k, r) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predict_scalar(ParamPoint{{x}}, set, k) ==
          doctest::Approx(trace_diagnostic(ParamPoint{{x}}, set, k)).epsilon(1e-12));
  }
}

TEST_CASE("fejer series agrees with direct summation") {
  for (int m : {1, 2}) {
    ParamSpace s(m, 3.0);
    const auto pts = sample(s, 300, 40 + m);
    Eigen::MatrixXd w(300, 2);
    Rng rng(6);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.uniform(-1, 1);
    const KernelSpec k = KernelSpec::fejer(s, m == 1 ? 50 : 12);
    REQUIRE(FejerSeries::supports(k));
    const FejerSeries fs(k, pts, w);
    const auto queries = sample(s, 25, 77);
    const Eigen::MatrixXcd got = fs.evaluate(queries);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (int d = 0; d < 2; ++d) {
        std::vector<double> col(300);
        for (int i = 0; i < 300; ++i) col[i] = w(i, d);
        const double direct = kernel_sum(queries[q], pts, col, k);
        CHECK(std::abs(got(q, d).real() - direct) <= 1e-9);
        CHECK(std::abs(got(q, d).imag()) <= 1e-9);
      }
    }
    const int p = m == 1 ? 64 : 9;
    const Eigen::MatrixXcd lat = fs.evaluate_lattice(p);
    const Eigen::MatrixXcd ref = fs.evaluate(grid(s, p));
    CHECK((lat - ref).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK_FALSE(FejerSeries::supports(KernelSpec::fejer(ParamSpace(3, 1.0), 4)));
  CHECK_FALSE(FejerSeries::supports(KernelSpec::gaussian(ParamSpace(1, 1.0), 0.05)));
}

TEST_CASE("sup error: lattice path equals grid path") {
  ParamSpace s(1, 2.0);
  const auto pts = sample(s, 2000, 12);
  std::vector<double> labels;
  for (const auto& x : pts) labels.push_back(smooth(x));
  const TrainingSet set = TrainingSet::scalar(pts, labels);
  const KernelSpec k = KernelSpec::fejer(s, 20);
  const auto g = grid(s, 300);
  const PredictionDiagnostics a = sup_error_scalar(set, k, smooth, g);
  const PredictionDiagnostics b = sup_error_scalar(set, k, smooth, 300);
  CHECK(a.grid_size == 300);
  CHECK(a.sup_error == doctest::Approx(b.sup_error).epsilon(1e-9));
  CHECK(a.trace_max_dev == doctest::Approx(b.trace_max_dev).epsilon(1e-9));
  CHECK(a.sup_error > 0.0);
  // Gaussian path (direct summation) also runs.
  CHECK(sup_error_scalar(set, KernelSpec::gaussian(s, 0.05), smooth, 100).sup_error > 0.0);
}

TEST_CASE("density sup error series vs direct") {
  ParamSpace s(1, 2.0);
  const TrainingSet set = random_density_set(s, 300, 2, 31);
  const MatrixTruth truth = [](const ParamPoint&) { return CMatrix(0.5 * CMatrix::Identity(2, 2)); };
  const PredictionDiagnostics a = sup_error_density(set, KernelSpec::fejer(s, 10), truth, 128);
  // Direct reference on the same lattice.
  double worst = 0.0, tr = 0.0;
  for (const auto& x : grid(s, 128)) {
    const CMatrix sig = predict_density(x, set, KernelSpec::fejer(s, 10));
    worst = std::max(worst, linf_entry_norm(sig, truth(x)));
    tr = std::max(tr, std::abs(sig.trace().real() - 1.0));
  }
  CHECK(a.sup_error == doctest::Approx(worst).epsilon(1e-9));
  CHECK(a.trace_max_dev == doctest::Approx(tr).epsilon(1e-9));
}

TEST_CASE("mismatched kernel and space") {
  ParamSpace s1(1, 2.0), s2(2, 2.0);
  const TrainingSet set = TrainingSet::scalar(sample(s1, 5, 1), {1, 2, 3, 4, 5});
  CHECK_THROWS_AS(predict_scalar(ParamPoint{{0.0, 0.0}}, set, KernelSpec::fejer(s2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(predict_density(ParamPoint{{0.0}}, set, KernelSpec::fejer(s1, 3)), std::invalid_argument);
}
