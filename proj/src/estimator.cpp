#include "pgk/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pgk/numeric.hpp"

namespace pgk {

namespace {

void check_points(const std::vector<ParamPoint>& points) {
  if (points.empty()) throw std::invalid_argument("TrainingSet: empty training set");
  const std::size_t m = points.front().dim();
  if (m == 0) throw std::invalid_argument("TrainingSet: zero-dimensional point");
  for (const auto& p : points) {
    if (p.dim() != m) throw std::invalid_argument("TrainingSet: inconsistent point dimensions");
  }
}

void check_compatible(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec) {
  const auto m = static_cast<std::size_t>(spec.space().dim());
  if (x.dim() != m || set.points().front().dim() != m) {
    throw std::invalid_argument("kernel/space dimension mismatch");
  }
}

struct Sums {
  double weighted = 0.0;
  double trace = 0.0;
};

// One pass computing sum w_i K_i and (1/N) sum K_i.
Sums kernel_sums(const ParamPoint& x, std::span<const ParamPoint> points,
                 std::span<const double> weights, const KernelSpec& spec) {
  CompensatedSum s, t;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double k = spec.pair(x.coords, points[i].coords);
    s.add(weights[i] * k);
    t.add(k);
  }
  return {s.value(), t.value() / static_cast<double>(points.size())};
}

std::vector<double> scaled_labels(const TrainingSet& set) {
  const auto& f = set.scalar_labels();
  const double n = static_cast<double>(f.size());
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f[i] / n;
  return w;
}

void require_scalar(const TrainingSet& set) {
  if (!set.has_scalar_labels()) throw std::invalid_argument("training labels are not scalars");
}

}  // namespace

TrainingSet TrainingSet::scalar(std::vector<ParamPoint> points, std::vector<double> labels,
                                std::uint64_t seed) {
  check_points(points);
  if (labels.size() != points.size()) {
    throw std::invalid_argument("TrainingSet: points and labels differ in length");
  }
  for (double v : labels) {
    if (!std::isfinite(v)) throw std::invalid_argument("TrainingSet: non-finite label");
  }
  TrainingSet s;
  s.points_ = std::move(points);
  s.labels_ = std::move(labels);
  s.seed_ = seed;
  return s;
}

TrainingSet TrainingSet::density(std::vector<ParamPoint> points,
                                 std::vector<DensityMatrix> labels, std::uint64_t seed) {
  check_points(points);
  if (labels.size() != points.size()) {
    throw std::invalid_argument("TrainingSet: points and labels differ in length");
  }
  const Eigen::Index d = labels.front().dim();
  for (const auto& rho : labels) {
    if (rho.dim() != d) throw std::invalid_argument("TrainingSet: label dimensions differ");
    if (!validate(rho.matrix()).passed()) throw std::invalid_argument("TrainingSet: invalid density label");
  }
  TrainingSet s;
  s.points_ = std::move(points);
  s.labels_ = std::move(labels);
  s.seed_ = seed;
  return s;
}

const std::vector<double>& TrainingSet::scalar_labels() const {
  if (!has_scalar_labels()) throw std::invalid_argument("TrainingSet holds density labels");
  return std::get<std::vector<double>>(labels_);
}

const std::vector<DensityMatrix>& TrainingSet::density_labels() const {
  if (has_scalar_labels()) throw std::invalid_argument("TrainingSet holds scalar labels");
  return std::get<std::vector<DensityMatrix>>(labels_);
}

double kernel_sum(const ParamPoint& x, std::span<const ParamPoint> points,
                  std::span<const double> weights, const KernelSpec& spec) {
  if (weights.size() != points.size()) {
    throw std::invalid_argument("kernel_sum: weights and points differ in length");
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    s.add(weights[i] * spec.pair(x.coords, points[i].coords));
  }
  return s.value();
}

CMatrix predict_density(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                        const PredictOptions& opts) {
  const auto& labels = set.density_labels();
  check_compatible(x, set, spec);
  if (!spec.is_positive() && !opts.allow_non_pgk) {
    throw std::invalid_argument("predict_density: kernel is not positive; set allow_non_pgk");
  }
  const auto& pts = set.points();
  const double inv_n = 1.0 / static_cast<double>(pts.size());
  CMatrix sigma = CMatrix::Zero(labels.front().dim(), labels.front().dim());
  CompensatedSum trace;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double k = spec.pair(x.coords, pts[i].coords);
    sigma += (k * inv_n) * labels[i].matrix();
    trace.add(k);
  }
  if (opts.renormalize) sigma /= trace.value() * inv_n;
  return sigma;
}

double predict_scalar(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                      const PredictOptions& opts) {
  require_scalar(set);
  check_compatible(x, set, spec);
  const std::vector<double> w = scaled_labels(set);
  if (!opts.renormalize) return kernel_sum(x, set.points(), w, spec);
  const Sums s = kernel_sums(x, set.points(), w, spec);
  return s.weighted / s.trace;
}

double trace_diagnostic(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec) {
  check_compatible(x, set, spec);
  CompensatedSum t;
  for (const auto& p : set.points()) t.add(spec.pair(x.coords, p.coords));
  return t.value() / static_cast<double>(set.size());
}

PredictionDiagnostics sup_error_scalar(const TrainingSet& set, const KernelSpec& spec,
                                       const ScalarTruth& truth, std::span<const ParamPoint> grid,
                                       const PredictOptions& opts) {
  require_scalar(set);
  if (grid.empty()) throw std::invalid_argument("sup_error_scalar: empty grid");
  const std::vector<double> w = scaled_labels(set);
  PredictionDiagnostics out;
  out.grid_size = grid.size();
  for (const auto& x : grid) {
    check_compatible(x, set, spec);
    const Sums s = kernel_sums(x, set.points(), w, spec);
    const double pred = opts.renormalize ? s.weighted / s.trace : s.weighted;
    out.sup_error = std::max(out.sup_error, std::abs(pred - truth(x)));
    out.trace_max_dev = std::max(out.trace_max_dev, std::abs(s.trace - 1.0));
  }
  out.runs = {out.sup_error};
  return out;
}

PredictionDiagnostics sup_error_scalar(const TrainingSet& set, const KernelSpec& spec,
                                       const ScalarTruth& truth, int points_per_dim,
                                       const PredictOptions& opts) {
  require_scalar(set);
  const std::vector<ParamPoint> lattice = grid(spec.space(), points_per_dim);
  if (!FejerSeries::supports(spec)) return sup_error_scalar(set, spec, truth, lattice, opts);
  check_compatible(lattice.front(), set, spec);

  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd w(n, 2);
  const auto& f = set.scalar_labels();
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i, 0) = f[static_cast<std::size_t>(i)] / static_cast<double>(n);
    w(i, 1) = 1.0 / static_cast<double>(n);
  }
  const FejerSeries series(spec, set.points(), w);
  const Eigen::MatrixXcd v = series.evaluate_lattice(points_per_dim);

  PredictionDiagnostics out;
  out.grid_size = lattice.size();
  for (std::size_t g = 0; g < lattice.size(); ++g) {
    const auto r = static_cast<Eigen::Index>(g);
    const double tr = v(r, 1).real();
    const double pred = opts.renormalize ? v(r, 0).real() / tr : v(r, 0).real();
    out.sup_error = std::max(out.sup_error, std::abs(pred - truth(lattice[g])));
    out.trace_max_dev = std::max(out.trace_max_dev, std::abs(tr - 1.0));
  }
  out.runs = {out.sup_error};
  return out;
}

PredictionDiagnostics sup_error_density(const TrainingSet& set, const KernelSpec& spec,
                                        const MatrixTruth& truth, int points_per_dim,
                                        const PredictOptions& opts) {
  const auto& labels = set.density_labels();
  const std::vector<ParamPoint> lattice = grid(spec.space(), points_per_dim);
  check_compatible(lattice.front(), set, spec);
  PredictionDiagnostics out;
  out.grid_size = lattice.size();

  if (!FejerSeries::supports(spec)) {
    for (const auto& x : lattice) {
      const CMatrix sigma = predict_density(x, set, spec, opts);
      const double tr = trace_diagnostic(x, set, spec);
      out.sup_error = std::max(out.sup_error, linf_entry_norm(sigma, truth(x)));
      out.trace_max_dev = std::max(out.trace_max_dev, std::abs(tr - 1.0));
    }
    out.runs = {out.sup_error};
    return out;
  }

  const Eigen::Index d = labels.front().dim();
  const auto n = static_cast<Eigen::Index>(set.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXcd w(n, d * d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CMatrix& rho = labels[static_cast<std::size_t>(i)].matrix();
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) w(i, a * d + b) = rho(a, b) * inv_n;
    }
    w(i, d * d) = inv_n;
  }
  const FejerSeries series(spec, set.points(), w);
  const Eigen::MatrixXcd v = series.evaluate_lattice(points_per_dim);
  CMatrix sigma(d, d);
  for (std::size_t g = 0; g < lattice.size(); ++g) {
    const auto r = static_cast<Eigen::Index>(g);
    const double tr = v(r, d * d).real();
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) sigma(a, b) = v(r, a * d + b);
    }
    if (opts.renormalize) sigma /= tr;
    out.sup_error = std::max(out.sup_error, linf_entry_norm(sigma, truth(lattice[g])));
    out.trace_max_dev = std::max(out.trace_max_dev, std::abs(tr - 1.0));
  }
  out.runs = {out.sup_error};
  return out;
}

}  // namespace pgk
