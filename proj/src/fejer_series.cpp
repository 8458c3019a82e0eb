#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pgk/estimator.hpp"

namespace pgk {

namespace {

constexpr Eigen::Index kChunk = 4096;
constexpr int kReseed = 16;

// out(k - kmin) = exp(i * sign * theta * k) for k in [kmin, kmin + count).
void fill_phases(double theta, int kmin, int count, double sign, Complex* out) {
  const Complex step = std::polar(1.0, sign * theta);
  Complex z;
  for (int j = 0; j < count; ++j) {
    if (j % kReseed == 0) {
      z = std::polar(1.0, sign * theta * static_cast<double>(kmin + j));
    } else {
      z *= step;
    }
    out[j] = z;
  }
}

// Q x count matrix of exp(+i theta_q k).
Eigen::MatrixXcd phase_rows(const std::vector<double>& thetas, int kmin, int count) {
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> e(
      static_cast<Eigen::Index>(thetas.size()), count);
  for (std::size_t q = 0; q < thetas.size(); ++q) {
    fill_phases(thetas[q], kmin, count, 1.0, e.row(static_cast<Eigen::Index>(q)).data());
  }
  return e;
}

}  // namespace

bool FejerSeries::supports(const KernelSpec& spec) {
  if (spec.space().dim() > 2) return false;
  if (spec.kind() == KernelKind::Fejer) return true;
  return spec.kind() == KernelKind::Weighted && spec.base() != nullptr &&
         spec.base()->kind() == KernelKind::Fejer;
}

FejerSeries::FejerSeries(const KernelSpec& spec, std::span<const ParamPoint> points,
                         const Eigen::MatrixXd& weights)
    : spec_(spec) {
  real_ = true;
  build(points, weights.cast<Complex>());
}

FejerSeries::FejerSeries(const KernelSpec& spec, std::span<const ParamPoint> points,
                         const Eigen::MatrixXcd& weights)
    : spec_(spec) {
  real_ = false;
  build(points, weights);
}

void FejerSeries::build(std::span<const ParamPoint> points, const Eigen::MatrixXcd& weights) {
  if (!supports(spec_)) {
    throw std::invalid_argument("FejerSeries: needs a (weighted) Fejer kernel with m <= 2");
  }
  if (static_cast<std::size_t>(weights.rows()) != points.size()) {
    throw std::invalid_argument("FejerSeries: weights rows must match the number of points");
  }
  weighted_ = spec_.kind() == KernelKind::Weighted;
  const KernelSpec& fejer = weighted_ ? *spec_.base() : spec_;
  m_ = spec_.space().dim();
  lambda_ = fejer.lambda();
  side_ = spec_.space().side();
  outputs_ = weights.cols();

  const int k1min = first_k_min();
  const int k1n = first_k_count();
  const int k2min = -(lambda_ - 1);
  const int k2n = 2 * lambda_ - 1;
  const double scale = 2.0 * std::numbers::pi / side_;
  const auto n = static_cast<Eigen::Index>(points.size());

  if (m_ == 1) {
    coeffs_.assign(1, Eigen::MatrixXcd::Zero(k1n, outputs_));
  } else {
    coeffs_.assign(static_cast<std::size_t>(outputs_), Eigen::MatrixXcd::Zero(k1n, k2n));
  }

  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor> p1(k1n, kChunk);
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> p2;
  if (m_ == 2) p2.resize(kChunk, k2n);
  Eigen::MatrixXcd w(kChunk, outputs_);
  Eigen::MatrixXcd p1w;

  for (Eigen::Index start = 0; start < n; start += kChunk) {
    const Eigen::Index b = std::min(kChunk, n - start);
    for (Eigen::Index j = 0; j < b; ++j) {
      const ParamPoint& x = points[static_cast<std::size_t>(start + j)];
      if (static_cast<int>(x.dim()) != m_) {
        throw std::invalid_argument("FejerSeries: point dimension mismatch");
      }
      const double omega = weighted_ ? spec_.weight(x.coords) : 1.0;
      if (!std::isfinite(omega)) throw std::domain_error("FejerSeries: non-finite weight");
      w.row(j) = weights.row(start + j) * omega;
      fill_phases(scale * x[0], k1min, k1n, -1.0, p1.col(j).data());
      if (m_ == 2) fill_phases(scale * x[1], k2min, k2n, -1.0, p2.row(j).data());
    }
    if (m_ == 1) {
      coeffs_[0].noalias() += p1.leftCols(b) * w.topRows(b);
    } else {
      for (Eigen::Index d = 0; d < outputs_; ++d) {
        p1w = p1.leftCols(b) * w.col(d).head(b).asDiagonal();
        coeffs_[static_cast<std::size_t>(d)].noalias() += p1w * p2.topRows(b);
      }
    }
  }

  // Fold the Fejer multipliers (and the conjugate-pair factor 2) into the coefficients.
  Eigen::VectorXd m1(k1n), m2(k2n);
  for (int j = 0; j < k1n; ++j) {
    const int k = k1min + j;
    m1(j) = multiplier(k) * ((real_ && k > 0) ? 2.0 : 1.0);
  }
  for (int j = 0; j < k2n; ++j) m2(j) = multiplier(k2min + j);
  if (m_ == 1) {
    coeffs_[0] = m1.asDiagonal() * coeffs_[0];
  } else {
    for (auto& c : coeffs_) c = m1.asDiagonal() * c * m2.asDiagonal();
  }
}

Eigen::MatrixXcd FejerSeries::evaluate(std::span<const ParamPoint> queries) const {
  const double scale = 2.0 * std::numbers::pi / side_;
  std::vector<double> t1(queries.size()), t2(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (static_cast<int>(queries[q].dim()) != m_) {
      throw std::invalid_argument("FejerSeries: query dimension mismatch");
    }
    t1[q] = scale * wrap_coordinate(queries[q][0], side_);
    if (m_ == 2) t2[q] = scale * wrap_coordinate(queries[q][1], side_);
  }
  const Eigen::MatrixXcd e1 = phase_rows(t1, first_k_min(), first_k_count());
  Eigen::MatrixXcd out;
  if (m_ == 1) {
    out = e1 * coeffs_[0];
  } else {
    const Eigen::MatrixXcd e2 = phase_rows(t2, -(lambda_ - 1), 2 * lambda_ - 1);
    out.resize(static_cast<Eigen::Index>(queries.size()), outputs_);
    for (Eigen::Index d = 0; d < outputs_; ++d) {
      const Eigen::MatrixXcd t = e1 * coeffs_[static_cast<std::size_t>(d)];
      out.col(d) = t.cwiseProduct(e2).rowwise().sum();
    }
  }
  if (real_) out = out.real().cast<Complex>();
  return out;
}

Eigen::MatrixXcd FejerSeries::evaluate_lattice(int points_per_dim) const {
  if (points_per_dim < 1) throw std::invalid_argument("evaluate_lattice: points_per_dim < 1");
  const double scale = 2.0 * std::numbers::pi / side_;
  std::vector<double> thetas = midpoints(side_, points_per_dim);
  for (double& t : thetas) t *= scale;
  const Eigen::MatrixXcd e1 = phase_rows(thetas, first_k_min(), first_k_count());
  const Eigen::Index g = points_per_dim;
  Eigen::MatrixXcd out;
  if (m_ == 1) {
    out = e1 * coeffs_[0];
  } else {
    const Eigen::MatrixXcd e2 = phase_rows(thetas, -(lambda_ - 1), 2 * lambda_ - 1);
    out.resize(g * g, outputs_);
    for (Eigen::Index d = 0; d < outputs_; ++d) {
      const Eigen::MatrixXcd v = (e1 * coeffs_[static_cast<std::size_t>(d)]) * e2.transpose();
      // Row-major flattening: second coordinate fastest.
      for (Eigen::Index a = 0; a < g; ++a) out.col(d).segment(a * g, g) = v.row(a).transpose();
    }
  }
  if (real_) out = out.real().cast<Complex>();
  return out;
}

}  // namespace pgk
