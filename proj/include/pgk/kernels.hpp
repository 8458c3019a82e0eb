#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pgk/param_space.hpp"

namespace pgk {

enum class KernelKind { Fejer, Dirichlet, GaussianPeriodic, Weighted };

const char* to_string(KernelKind kind);

/// A translational kernel on the periodic box, plus the weighted variant used
/// for non-uniform sampling densities.
///
/// Fejer and Dirichlet kernels are indexed by an integer lambda; the periodized
/// Gaussian exp(-|x|^2/h) by its bandwidth h, where 1/sqrt(h) plays the role of
/// lambda. A weighted kernel multiplies a base kernel by
/// omega(x) = rho_0(x)/rho(x), with rho the space density.
class KernelSpec {
 public:
  static KernelSpec fejer(ParamSpace space, int lambda);
  /// One-dimensional rectangular Dirichlet kernel; rejects m != 1.
  static KernelSpec dirichlet(ParamSpace space, int lambda);
  /// Requires 0 < h < L/2.
  static KernelSpec gaussian(ParamSpace space, double bandwidth);
  static KernelSpec weighted(const KernelSpec& base);

  KernelKind kind() const { return kind_; }
  int lambda() const { return lambda_; }
  double bandwidth() const { return bandwidth_; }
  const ParamSpace& space() const { return space_; }
  const KernelSpec* base() const { return base_.get(); }

  /// Nonnegative by construction (Fejer, Gaussian, Weighted over them).
  bool is_positive() const;
  /// Product of one-dimensional factors (Fejer, Gaussian, Dirichlet).
  bool is_separable() const { return kind_ != KernelKind::Weighted; }

  /// Kernel value at a displacement; the displacement is wrapped first.
  double operator()(std::span<const double> x) const;
  double operator()(const ParamPoint& x) const { return (*this)(std::span<const double>(x.coords)); }

  /// K(x, y) as used by the estimators. Equals K(x - y) for translational
  /// kernels; a weighted kernel applies omega at the sample point y.
  double pair(std::span<const double> x, std::span<const double> y) const;

  /// Weight omega(y) = rho_0/rho(y); 1 for unweighted kernels.
  double weight(std::span<const double> y) const;

  /// One-dimensional factor for separable kernels, at a wrapped coordinate.
  double factor(double x) const;

  /// K(0), the diagonal of the translational kernel (R^2 in RKHS bounds).
  double at_origin() const;

  /// Same kernel with its index scaled by `factor` (lambda * factor, or
  /// h / factor^2 for the Gaussian). Used for convergence sweeps.
  KernelSpec rescaled(double factor) const;

  /// Effective index: lambda, or 1/sqrt(h) for the Gaussian.
  double effective_index() const;

 private:
  explicit KernelSpec(ParamSpace space) : space_(std::move(space)) {}

  KernelKind kind_ = KernelKind::Fejer;
  int lambda_ = 1;
  double bandwidth_ = 0.0;
  ParamSpace space_;
  std::shared_ptr<const KernelSpec> base_;
};

/// Rectangular Fejer kernel (1/lambda^m) prod_j sin^2(lambda pi x_j/L)/sin^2(pi x_j/L).
double eval_fejer(std::span<const double> x, int lambda, const ParamSpace& space);
double eval_fejer(const ParamPoint& x, int lambda, const ParamSpace& space);

/// sin((2 lambda + 1) pi x/L)/sin(pi x/L); throws for m != 1.
double eval_dirichlet_1d(const ParamPoint& x, int lambda, const ParamSpace& space);

/// C_h sum_v exp(-|x + L v|^2/h), C_h = (L/sqrt(pi h))^m.
double eval_gaussian(const ParamPoint& x, double bandwidth, const ParamSpace& space);

/// omega(x) * base(x); throws std::domain_error when omega is not finite.
double eval_weighted(const ParamPoint& x, const KernelSpec& spec);

struct PgkReport {
  double min_value = 0.0;
  double sup_value = 0.0;
  double normalization = 0.0;
  std::vector<std::pair<double, double>> tail_integrals;  // (eta, tail)
  double fitted_tail_exponent = 0.0;
  double fitted_sup_exponent = 0.0;  // tau
  bool passed = false;
};

/// Numerical check of positivity, normalization and eta-convergence.
///
/// Min/sup are taken over a midpoint lattice with `quadrature_points` per
/// dimension; integrals are composite midpoint sums against d mu. The tail
/// exponent is a least-squares fit of log(tail) vs log(index) over the sweep
/// index * {1, 2, 4} (minimum over the requested etas). Throws
/// std::length_error for m > 3 or more than 1e8 lattice points.
PgkReport verify_pgk(const KernelSpec& spec, std::span<const double> etas, int quadrature_points);

/// (1/L) integral |D_lambda| over one period, m = 1.
double dirichlet_l1_norm(int lambda, const ParamSpace& space, int quadrature_points);

using ScalarField = std::function<double(const ParamPoint&)>;

/// (f * K)(x) = (1/L^m) integral f(x - y) K(y) dy by composite midpoint
/// quadrature with periodic wrap. m <= 2.
double convolve_quadrature(const ScalarField& f, const KernelSpec& spec, const ParamPoint& x,
                           int quadrature_points);

}  // namespace pgk
