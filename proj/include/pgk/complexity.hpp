#pragma once

#include <optional>

#include "pgk/kernels.hpp"

namespace pgk {

/// Target accuracy and problem constants for the sample-complexity formulas.
///
/// B is twice the sup of |f|. The Lipschitz scale eta is epsilon/(4 C_L)
/// for k = 1 and epsilon^k/(4 C_L) in general. `log_factor` overrides
/// log(2/delta) (log(2M/delta) in the multi-function bound) when set.
struct ComplexityBudget {
  double epsilon = 0.1;
  double delta = 0.05;
  int m = 1;
  double L = 2.0;
  double B = 2.0;
  double C_L = 1.0;
  int M = 1;
  double k = 1.0;
  std::optional<double> log_factor;

  /// Throws std::invalid_argument unless 0 < epsilon, 0 < delta < 1, B > 0,
  /// C_L > 0, M >= 1, k >= 0, m >= 0 and L > 0.
  void validate() const;

  /// Configuration used for the headline comparison: m = 2, L = 2,
  /// B = M = n (n = 100 local terms), epsilon = 0.1, C_L = 1 and a unit
  /// log factor.
  static ComplexityBudget comparison();

  double eta() const;
  /// log(2/delta) or the override.
  double log_term() const;
  /// log(2M/delta) or the override.
  double log_term_multi() const;
};

/// A value that may exceed double range: log10 is always exact, `value` is
/// +inf on overflow.
struct BigReal {
  double log10 = 0.0;
  double value = 0.0;
  static BigReal from_log10(double l);
};

/// epsilon / (4 C_L).
double eta_lipschitz(double epsilon, double C_L);

/// 4 m L^2 / (pi^2 eta^2).
double c_const(int m, double L, double eta);

/// ceil((4 B C^m / epsilon)^(1/m)).
long long lambda_min(double B, double C, int m, double epsilon);

/// 32 B^4 C^{2m} epsilon^-4 log(2/delta).
BigReal n_fejer(const ComplexityBudget& b);

/// 32 B^4 C^{2m} epsilon^-4 log(2M/delta) (B, C taken as the maxima).
BigReal n_fejer_multi(const ComplexityBudget& b);

/// C_g = (m L^2 / (pi eta^2)) log(2 m B / epsilon).
double c_gaussian(const ComplexityBudget& b);

/// 2 B^2 C_g^m epsilon^-2 log(2/delta); requires m >= 2.
BigReal n_gaussian(const ComplexityBudget& b);

/// N_0 = (B^2/epsilon^2) (2m + 1)^{1/epsilon^2}.
BigReal n_prior(const ComplexityBudget& b);

/// n_kernel / n_prior for KernelKind::Fejer or KernelKind::GaussianPeriodic.
BigReal compare_ratio(const ComplexityBudget& b, KernelKind kind);

/// 2 B^2 lambda^{2m} epsilon^-2 log(2/delta): samples for the pointwise
/// concentration |f_N(x) - f*F(x)| < epsilon/2 at a fixed x.
double n_pointwise(double B, int lambda, int m, double epsilon, double delta);

}  // namespace pgk
