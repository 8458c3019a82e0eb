#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "pgk/kernels.hpp"
#include "pgk/param_space.hpp"
#include "pgk/quantum.hpp"

namespace pgk {

/// Training pairs (x_i, label_i), labels either scalars or density matrices.
class TrainingSet {
 public:
  static TrainingSet scalar(std::vector<ParamPoint> points, std::vector<double> labels,
                            std::uint64_t seed = 0);
  /// Every label must pass validate() at 1e-10.
  static TrainingSet density(std::vector<ParamPoint> points, std::vector<DensityMatrix> labels,
                             std::uint64_t seed = 0);

  std::size_t size() const { return points_.size(); }
  const std::vector<ParamPoint>& points() const { return points_; }
  bool has_scalar_labels() const { return std::holds_alternative<std::vector<double>>(labels_); }
  const std::vector<double>& scalar_labels() const;
  const std::vector<DensityMatrix>& density_labels() const;
  std::uint64_t seed() const { return seed_; }

 private:
  TrainingSet() = default;
  std::vector<ParamPoint> points_;
  std::variant<std::vector<double>, std::vector<DensityMatrix>> labels_;
  std::uint64_t seed_ = 0;
};

struct PredictOptions {
  /// Divide predictions by the trace diagnostic (1/N) sum K(x - x_i).
  bool renormalize = false;
  /// Permit sign-indefinite kernels in predict_density (counterexamples only).
  bool allow_non_pgk = false;
};

/// sum_i w_i K(x, x_i) with compensated summation in index order.
double kernel_sum(const ParamPoint& x, std::span<const ParamPoint> points,
                  std::span<const double> weights, const KernelSpec& spec);

/// sigma_N(x) = (1/N) sum_i K(x - x_i) rho_i. Not renormalized by default.
/// Throws std::invalid_argument for scalar labels, a kernel/space mismatch, or
/// a non-positive kernel without allow_non_pgk.
CMatrix predict_density(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                        const PredictOptions& opts = {});

/// (1/N) sum_i K(x - x_i) f(x_i).
double predict_scalar(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                      const PredictOptions& opts = {});

/// Tr sigma_N(x) = (1/N) sum_i K(x - x_i).
double trace_diagnostic(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec);

struct PredictionDiagnostics {
  double sup_error = 0.0;
  double trace_max_dev = 0.0;
  std::size_t grid_size = 0;
  std::vector<double> runs;
};

using ScalarTruth = std::function<double(const ParamPoint&)>;
using MatrixTruth = std::function<CMatrix(const ParamPoint&)>;

/// max over grid of |f_hat - f| and of |Tr sigma_N - 1|, by direct summation.
PredictionDiagnostics sup_error_scalar(const TrainingSet& set, const KernelSpec& spec,
                                       const ScalarTruth& truth, std::span<const ParamPoint> grid,
                                       const PredictOptions& opts = {});

/// Same on the midpoint lattice grid(space, points_per_dim). Fejer kernels
/// with m <= 2 are evaluated through their exact Fourier series.
PredictionDiagnostics sup_error_scalar(const TrainingSet& set, const KernelSpec& spec,
                                       const ScalarTruth& truth, int points_per_dim,
                                       const PredictOptions& opts = {});

/// Max entry-wise (l_inf) error of sigma_N against truth on the lattice.
PredictionDiagnostics sup_error_density(const TrainingSet& set, const KernelSpec& spec,
                                        const MatrixTruth& truth, int points_per_dim,
                                        const PredictOptions& opts = {});

/// Exact evaluation of sum_i w_i F_lambda(x - x_i) for the Fejer kernel via
///   sum_{|k_j| < lambda} prod_j (1 - |k_j|/lambda) c_k e^{2 pi i k.x/L},
///   c_k = sum_i w_i e^{-2 pi i k.x_i/L}.
/// Cost O(N lambda^m D) to build and O(lambda^m D) per query, instead of
/// O(N D) per query. Supports m <= 2 and weighted Fejer kernels (omega(x_i)
/// is folded into w_i). Weights are an N x D matrix, one column per output.
class FejerSeries {
 public:
  FejerSeries(const KernelSpec& spec, std::span<const ParamPoint> points,
              const Eigen::MatrixXd& weights);
  FejerSeries(const KernelSpec& spec, std::span<const ParamPoint> points,
              const Eigen::MatrixXcd& weights);

  static bool supports(const KernelSpec& spec);

  Eigen::Index outputs() const { return outputs_; }

  /// Q x D values at arbitrary points.
  Eigen::MatrixXcd evaluate(std::span<const ParamPoint> queries) const;

  /// Values on grid(space, points_per_dim), row order as grid() (last
  /// coordinate fastest).
  Eigen::MatrixXcd evaluate_lattice(int points_per_dim) const;

 private:
  void build(std::span<const ParamPoint> points, const Eigen::MatrixXcd& weights);
  int first_k_min() const { return real_ ? 0 : -(lambda_ - 1); }
  int first_k_count() const { return real_ ? lambda_ : 2 * lambda_ - 1; }
  double multiplier(int k) const { return 1.0 - std::abs(k) / static_cast<double>(lambda_); }

  int m_ = 1;
  int lambda_ = 1;
  double side_ = 1.0;
  bool real_ = false;
  bool weighted_ = false;
  Eigen::Index outputs_ = 0;
  KernelSpec spec_;
  // m = 1: coeffs_[0] is K1 x D. m = 2: coeffs_[d] is K1 x K2 for output d.
  std::vector<Eigen::MatrixXcd> coeffs_;
};

}  // namespace pgk
