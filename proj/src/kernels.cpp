#include "pgk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pgk/numeric.hpp"

namespace pgk {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this |x|/L the sine ratios are replaced by their series.
constexpr double kSeriesCutoff = 1e-8;

double fejer_factor(double x, int lambda, double side) {
  const double u = kPi * x / side;
  const double lam = lambda;
  if (std::abs(x) < kSeriesCutoff * side) {
    return lam * (1.0 - (lam * lam - 1.0) * u * u / 3.0);
  }
  const double num = std::sin(lam * u);
  const double den = std::sin(u);
  return std::min(num * num / (den * den) / lam, lam);
}

double dirichlet_factor(double x, int lambda, double side) {
  const double u = kPi * x / side;
  const double order = 2.0 * lambda + 1.0;
  if (std::abs(x) < kSeriesCutoff * side) {
    return order * (1.0 - (order * order - 1.0) * u * u / 6.0);
  }
  return std::sin(order * u) / std::sin(u);
}

int gaussian_shells(double bandwidth, double side) {
  // exp(-((s - 1/2) L)^2 / h) < 1e-17 beyond s shells.
  return static_cast<int>(std::ceil(0.5 + std::sqrt(39.2 * bandwidth) / side));
}

double gaussian_factor(double x, double bandwidth, double side) {
  const int shells = gaussian_shells(bandwidth, side);
  double s = 0.0;
  for (int v = -shells; v <= shells; ++v) {
    const double y = x + v * side;
    s += std::exp(-y * y / bandwidth);
  }
  return side / std::sqrt(kPi * bandwidth) * s;
}

void check_dim(std::span<const double> x, const ParamSpace& space) {
  if (x.size() != static_cast<std::size_t>(space.dim())) {
    throw std::invalid_argument("kernel: dimension mismatch");
  }
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(std::max(y[i], 1e-300));
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(std::max(y[i], 1e-300)) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct LatticeStats {
  double min_value = 0.0;
  double sup_value = 0.0;
  double normalization = 0.0;
  std::vector<double> tails;
};

// One pass over the midpoint lattice: extremes, integral against d mu, and
// tail integrals of |K| outside the l2 ball of each radius.
LatticeStats lattice_stats(const KernelSpec& spec, std::span<const double> etas, int q) {
  const ParamSpace& space = spec.space();
  const int m = space.dim();
  if (m > 3) throw std::length_error("verify_pgk: quadrature budget exceeded for m > 3");
  if (std::pow(static_cast<double>(q), m) > 1e8 + 0.5) {
    throw std::length_error("verify_pgk: more than 1e8 quadrature points");
  }
  const std::vector<double> mid = midpoints(space.side(), q);
  std::vector<double> factor(mid.size());
  if (spec.is_separable()) {
    for (std::size_t i = 0; i < mid.size(); ++i) factor[i] = spec.factor(mid[i]);
  }
  std::vector<double> eta2(etas.size());
  for (std::size_t e = 0; e < etas.size(); ++e) eta2[e] = etas[e] * etas[e];

  const bool uniform = space.is_uniform();
  const double cell = std::pow(space.side() / q, m);
  const double uniform_weight = std::pow(static_cast<double>(q), -m);

  LatticeStats st;
  st.min_value = INFINITY;
  st.sup_value = -INFINITY;
  st.tails.assign(etas.size(), 0.0);
  CompensatedSum norm;
  std::vector<CompensatedSum> tail(etas.size());

  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<double> x(static_cast<std::size_t>(m));
  while (true) {
    double k = 1.0;
    double r2 = 0.0;
    for (int j = 0; j < m; ++j) {
      x[j] = mid[idx[j]];
      r2 += x[j] * x[j];
      if (spec.is_separable()) k *= factor[idx[j]];
    }
    if (!spec.is_separable()) k = spec(x);
    const double w = uniform ? uniform_weight : space.density_at(x) * cell;
    st.min_value = std::min(st.min_value, k);
    st.sup_value = std::max(st.sup_value, k);
    norm.add(k * w);
    for (std::size_t e = 0; e < eta2.size(); ++e) {
      if (r2 >= eta2[e]) tail[e].add(std::abs(k) * w);
    }
    int j = 0;
    while (j < m && ++idx[j] == q) idx[j++] = 0;
    if (j == m) break;
  }
  st.normalization = norm.value();
  for (std::size_t e = 0; e < etas.size(); ++e) st.tails[e] = tail[e].value();
  return st;
}

}  // namespace

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Fejer: return "fejer";
    case KernelKind::Dirichlet: return "dirichlet";
    case KernelKind::GaussianPeriodic: return "gaussian";
    case KernelKind::Weighted: return "weighted";
  }
  return "unknown";
}

KernelSpec KernelSpec::fejer(ParamSpace space, int lambda) {
  if (lambda < 1) throw std::invalid_argument("fejer: lambda must be >= 1");
  KernelSpec k(std::move(space));
  k.kind_ = KernelKind::Fejer;
  k.lambda_ = lambda;
  return k;
}

KernelSpec KernelSpec::dirichlet(ParamSpace space, int lambda) {
  if (lambda < 0) throw std::invalid_argument("dirichlet: lambda must be >= 0");
  if (space.dim() != 1) {
    throw std::invalid_argument("dirichlet: only the one-dimensional kernel is supported");
  }
  KernelSpec k(std::move(space));
  k.kind_ = KernelKind::Dirichlet;
  k.lambda_ = lambda;
  return k;
}

KernelSpec KernelSpec::gaussian(ParamSpace space, double bandwidth) {
  if (!(bandwidth > 0.0) || !(bandwidth < 0.5 * space.side())) {
    throw std::invalid_argument("gaussian: bandwidth must satisfy 0 < h < L/2");
  }
  KernelSpec k(std::move(space));
  k.kind_ = KernelKind::GaussianPeriodic;
  k.bandwidth_ = bandwidth;
  return k;
}

KernelSpec KernelSpec::weighted(const KernelSpec& base) {
  if (base.kind() == KernelKind::Weighted) {
    throw std::invalid_argument("weighted: base kernel is already weighted");
  }
  KernelSpec k(base.space());
  k.kind_ = KernelKind::Weighted;
  k.lambda_ = base.lambda();
  k.bandwidth_ = base.bandwidth();
  k.base_ = std::make_shared<const KernelSpec>(base);
  return k;
}

bool KernelSpec::is_positive() const {
  switch (kind_) {
    case KernelKind::Fejer:
    case KernelKind::GaussianPeriodic: return true;
    case KernelKind::Dirichlet: return false;
    case KernelKind::Weighted: return base_->is_positive();
  }
  return false;
}

double KernelSpec::factor(double x) const {
  const double side = space_.side();
  switch (kind_) {
    case KernelKind::Fejer: return fejer_factor(x, lambda_, side);
    case KernelKind::Dirichlet: return dirichlet_factor(x, lambda_, side);
    case KernelKind::GaussianPeriodic: return gaussian_factor(x, bandwidth_, side);
    case KernelKind::Weighted: break;
  }
  throw std::logic_error("factor: weighted kernels are not separable");
}

double KernelSpec::operator()(std::span<const double> x) const {
  check_dim(x, space_);
  if (kind_ == KernelKind::Weighted) return weight(x) * (*base_)(x);
  const double side = space_.side();
  double v = 1.0;
  for (double c : x) v *= factor(wrap_coordinate(c, side));
  return v;
}

double KernelSpec::weight(std::span<const double> y) const {
  if (kind_ != KernelKind::Weighted || space_.is_uniform()) return 1.0;
  const double w = space_.uniform_density() / space_.density_at(y);
  if (!std::isfinite(w) || w <= 0.0) {
    throw std::domain_error("weighted kernel: omega is not finite and positive");
  }
  return w;
}

double KernelSpec::pair(std::span<const double> x, std::span<const double> y) const {
  check_dim(x, space_);
  check_dim(y, space_);
  const KernelSpec& k = kind_ == KernelKind::Weighted ? *base_ : *this;
  const double side = space_.side();
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= k.factor(wrap_coordinate(x[j] - y[j], side));
  return kind_ == KernelKind::Weighted ? weight(y) * v : v;
}

double KernelSpec::at_origin() const {
  const std::vector<double> zero(static_cast<std::size_t>(space_.dim()), 0.0);
  return (*this)(zero);
}

KernelSpec KernelSpec::rescaled(double f) const {
  switch (kind_) {
    case KernelKind::Fejer:
      return fejer(space_, static_cast<int>(std::lround(lambda_ * f)));
    case KernelKind::Dirichlet:
      return dirichlet(space_, static_cast<int>(std::lround(lambda_ * f)));
    case KernelKind::GaussianPeriodic:
      return gaussian(space_, bandwidth_ / (f * f));
    case KernelKind::Weighted:
      return weighted(base_->rescaled(f));
  }
  return *this;
}

double KernelSpec::effective_index() const {
  switch (kind_) {
    case KernelKind::Fejer:
    case KernelKind::Dirichlet: return lambda_;
    case KernelKind::GaussianPeriodic: return 1.0 / std::sqrt(bandwidth_);
    case KernelKind::Weighted: return base_->effective_index();
  }
  return 0.0;
}

double eval_fejer(std::span<const double> x, int lambda, const ParamSpace& space) {
  check_dim(x, space);
  double v = 1.0;
  for (double c : x) v *= fejer_factor(wrap_coordinate(c, space.side()), lambda, space.side());
  return v;
}

double eval_fejer(const ParamPoint& x, int lambda, const ParamSpace& space) {
  return eval_fejer(std::span<const double>(x.coords), lambda, space);
}

double eval_dirichlet_1d(const ParamPoint& x, int lambda, const ParamSpace& space) {
  if (space.dim() != 1 || x.dim() != 1) {
    throw std::invalid_argument("eval_dirichlet_1d: only m = 1 is supported");
  }
  return dirichlet_factor(wrap_coordinate(x[0], space.side()), lambda, space.side());
}

double eval_gaussian(const ParamPoint& x, double bandwidth, const ParamSpace& space) {
  return KernelSpec::gaussian(space, bandwidth)(x);
}

double eval_weighted(const ParamPoint& x, const KernelSpec& spec) {
  if (spec.kind() != KernelKind::Weighted) {
    throw std::invalid_argument("eval_weighted: kernel is not weighted");
  }
  return spec(x);
}

PgkReport verify_pgk(const KernelSpec& spec, std::span<const double> etas, int quadrature_points) {
  for (double eta : etas) {
    if (!(eta > 0.0) || eta > spec.space().side()) {
      throw std::invalid_argument("verify_pgk: eta must lie in (0, L]");
    }
  }
  PgkReport report;
  const LatticeStats base = lattice_stats(spec, etas, quadrature_points);
  report.min_value = base.min_value;
  report.sup_value = base.sup_value;
  report.normalization = base.normalization;
  for (std::size_t e = 0; e < etas.size(); ++e) {
    report.tail_integrals.emplace_back(etas[e], base.tails[e]);
  }

  constexpr double kSweep[] = {1.0, 2.0, 4.0};
  std::vector<double> index, sup;
  std::vector<std::vector<double>> tails(etas.size());
  for (double f : kSweep) {
    const KernelSpec k = f == 1.0 ? spec : spec.rescaled(f);
    const LatticeStats st = f == 1.0 ? base : lattice_stats(k, etas, quadrature_points);
    index.push_back(k.effective_index());
    sup.push_back(st.sup_value);
    for (std::size_t e = 0; e < etas.size(); ++e) tails[e].push_back(st.tails[e]);
  }
  report.fitted_sup_exponent = loglog_slope(index, sup);
  report.fitted_tail_exponent = INFINITY;
  for (const auto& t : tails) {
    report.fitted_tail_exponent = std::min(report.fitted_tail_exponent, -loglog_slope(index, t));
  }
  if (etas.empty()) report.fitted_tail_exponent = 0.0;

  report.passed = report.min_value >= -1e-12 && std::abs(report.normalization - 1.0) <= 1e-4 &&
                  report.fitted_tail_exponent >= 0.9;
  return report;
}

double dirichlet_l1_norm(int lambda, const ParamSpace& space, int quadrature_points) {
  if (space.dim() != 1) throw std::invalid_argument("dirichlet_l1_norm: m must be 1");
  const std::vector<double> mid = midpoints(space.side(), quadrature_points);
  CompensatedSum s;
  for (double x : mid) s.add(std::abs(dirichlet_factor(x, lambda, space.side())));
  return s.value() / quadrature_points;
}

double convolve_quadrature(const ScalarField& f, const KernelSpec& spec, const ParamPoint& x,
                           int quadrature_points) {
  const ParamSpace& space = spec.space();
  const int m = space.dim();
  if (m > 2 || std::pow(static_cast<double>(quadrature_points), m) > 1e8 + 0.5) {
    throw std::length_error("convolve_quadrature: quadrature budget exceeded");
  }
  if (x.dim() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("convolve_quadrature: dimension mismatch");
  }
  const std::vector<double> mid = midpoints(space.side(), quadrature_points);
  std::vector<double> factor;
  if (spec.is_separable()) {
    factor.resize(mid.size());
    for (std::size_t i = 0; i < mid.size(); ++i) factor[i] = spec.factor(mid[i]);
  }
  CompensatedSum s;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  ParamPoint y{std::vector<double>(static_cast<std::size_t>(m))};
  ParamPoint shifted{std::vector<double>(static_cast<std::size_t>(m))};
  while (true) {
    double k = 1.0;
    for (int j = 0; j < m; ++j) {
      y[j] = mid[idx[j]];
      shifted[j] = wrap_coordinate(x[j] - y[j], space.side());
      if (spec.is_separable()) k *= factor[idx[j]];
    }
    if (!spec.is_separable()) k = spec(y);
    s.add(f(shifted) * k);
    int j = 0;
    while (j < m && ++idx[j] == quadrature_points) idx[j++] = 0;
    if (j == m) break;
  }
  return s.value() / std::pow(static_cast<double>(quadrature_points), m);
}

}  // namespace pgk
