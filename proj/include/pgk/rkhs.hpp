#pragma once

#include <functional>
#include <span>

#include "pgk/estimator.hpp"

namespace pgk {

/// Inputs of the Rademacher generalization bounds. beta = 2 lambda_f R and
/// trace_K <= N R^2 are checked by validate().
struct RkhsBoundInputs {
  double lambda_f = 1.0;
  double R = 1.0;
  double beta = 2.0;
  std::size_t N = 1;
  double delta = 0.05;
  double trace_K = 1.0;

  /// Fills beta = 2 lambda_f R and trace_K = N K(0) (translational kernel).
  static RkhsBoundInputs for_kernel(const KernelSpec& spec, double B, std::size_t N, double delta);

  void validate() const;
};

enum class BoundVariant { Radius, Trace };

/// sum_i alpha_i K(x - x_i), same summation order as predict_scalar.
double representer_predict(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                           std::span<const double> alphas);

/// Default coefficients alpha_i = f(x_i)/N.
std::vector<double> default_alphas(const TrainingSet& set);

using Predictor = std::function<double(const ParamPoint&)>;

/// (1/N) sum_i |predictor(x_i) - f(x_i)|.
double empirical_error(const TrainingSet& set, const Predictor& predictor);

/// Mean of |predictor - truth| over `test_points`.
double expected_error_estimate(std::span<const ParamPoint> test_points, const Predictor& predictor,
                               const ScalarTruth& truth);

/// Radius:    E_t + (8 lambda_f R / sqrt N) sqrt(log(2/delta)/2).
/// Trace:     E_t + 2 lambda_f sqrt(trace_K)/N + 3 beta sqrt(log(2/delta)/(2N)).
double generalization_bound(const RkhsBoundInputs& in, double empirical, BoundVariant variant);

/// (1/epsilon^2) (8 lambda_f R sqrt(log(2/delta)/2))^2.
double n_rkhs(double epsilon, double lambda_f, double R, double delta);

/// Same with log(2/delta) supplied directly.
double n_rkhs_log(double epsilon, double lambda_f, double R, double log_term);

}  // namespace pgk
