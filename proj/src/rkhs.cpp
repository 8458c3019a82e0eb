#include "pgk/rkhs.hpp"

#include <cmath>
#include <stdexcept>

#include "pgk/numeric.hpp"

namespace pgk {

RkhsBoundInputs RkhsBoundInputs::for_kernel(const KernelSpec& spec, double B, std::size_t N,
                                            double delta) {
  if (!(B > 0.0)) throw std::invalid_argument("RkhsBoundInputs: B must be > 0");
  RkhsBoundInputs in;
  in.R = std::sqrt(spec.at_origin());
  in.lambda_f = B * in.R / 2.0;
  in.beta = 2.0 * in.lambda_f * in.R;
  in.N = N;
  in.delta = delta;
  in.trace_K = static_cast<double>(N) * spec.at_origin();
  in.validate();
  return in;
}

void RkhsBoundInputs::validate() const {
  if (!(lambda_f > 0.0) || !(R > 0.0)) throw std::invalid_argument("RkhsBoundInputs: lambda_f, R > 0");
  if (N < 1) throw std::invalid_argument("RkhsBoundInputs: N must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("RkhsBoundInputs: delta in (0,1)");
  if (std::abs(beta - 2.0 * lambda_f * R) > 1e-12 * std::max(1.0, beta)) {
    throw std::invalid_argument("RkhsBoundInputs: beta must equal 2 lambda_f R");
  }
  if (trace_K < 0.0 || trace_K > static_cast<double>(N) * R * R * (1.0 + 1e-12)) {
    throw std::invalid_argument("RkhsBoundInputs: trace_K must lie in [0, N R^2]");
  }
}

double representer_predict(const ParamPoint& x, const TrainingSet& set, const KernelSpec& spec,
                           std::span<const double> alphas) {
  if (alphas.size() != set.size()) {
    throw std::invalid_argument("representer_predict: need one coefficient per sample");
  }
  if (x.dim() != static_cast<std::size_t>(spec.space().dim())) {
    throw std::invalid_argument("kernel/space dimension mismatch");
  }
  return kernel_sum(x, set.points(), alphas, spec);
}

std::vector<double> default_alphas(const TrainingSet& set) {
  const auto& f = set.scalar_labels();
  const double n = static_cast<double>(f.size());
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = f[i] / n;
  return a;
}

double empirical_error(const TrainingSet& set, const Predictor& predictor) {
  const auto& f = set.scalar_labels();
  const auto& pts = set.points();
  CompensatedSum s;
  for (std::size_t i = 0; i < pts.size(); ++i) s.add(std::abs(predictor(pts[i]) - f[i]));
  return s.value() / static_cast<double>(pts.size());
}

double expected_error_estimate(std::span<const ParamPoint> test_points, const Predictor& predictor,
                               const ScalarTruth& truth) {
  if (test_points.empty()) throw std::invalid_argument("expected_error_estimate: T must be >= 1");
  CompensatedSum s;
  for (const auto& x : test_points) s.add(std::abs(predictor(x) - truth(x)));
  return s.value() / static_cast<double>(test_points.size());
}

double generalization_bound(const RkhsBoundInputs& in, double empirical, BoundVariant variant) {
  in.validate();
  if (!(empirical >= 0.0)) throw std::invalid_argument("generalization_bound: empirical < 0");
  const double n = static_cast<double>(in.N);
  const double lg = std::log(2.0 / in.delta);
  if (variant == BoundVariant::Radius) {
    return empirical + 8.0 * in.lambda_f * in.R / std::sqrt(n) * std::sqrt(lg / 2.0);
  }
  return empirical + 2.0 * in.lambda_f * std::sqrt(in.trace_K) / n +
         3.0 * in.beta * std::sqrt(lg / (2.0 * n));
}

double n_rkhs_log(double epsilon, double lambda_f, double R, double log_term) {
  if (!(epsilon > 0.0) || !(lambda_f > 0.0) || !(R > 0.0) || !(log_term > 0.0)) {
    throw std::invalid_argument("n_rkhs: inputs must be positive");
  }
  const double t = 8.0 * lambda_f * R * std::sqrt(log_term / 2.0);
  return t * t / (epsilon * epsilon);
}

double n_rkhs(double epsilon, double lambda_f, double R, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("n_rkhs: delta in (0,1)");
  return n_rkhs_log(epsilon, lambda_f, R, std::log(2.0 / delta));
}

}  // namespace pgk
