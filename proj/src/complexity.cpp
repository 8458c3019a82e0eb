#include "pgk/complexity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pgk {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(what);
}

}  // namespace

void ComplexityBudget::validate() const {
  require_positive(epsilon, "budget: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("budget: delta must be in (0,1)");
  require_positive(B, "budget: B must be > 0");
  require_positive(C_L, "budget: C_L must be > 0");
  require_positive(L, "budget: L must be > 0");
  if (M < 1) throw std::invalid_argument("budget: M must be >= 1");
  if (!(k >= 0.0)) throw std::invalid_argument("budget: k must be >= 0");
  if (m < 0) throw std::invalid_argument("budget: m must be >= 0");
  if (log_factor && !(*log_factor > 0.0)) throw std::invalid_argument("budget: log factor <= 0");
}

ComplexityBudget ComplexityBudget::comparison() {
  ComplexityBudget b;
  b.epsilon = 0.1;
  b.delta = 0.05;
  b.m = 2;
  b.L = 2.0;
  b.B = 100.0;
  b.M = 100;
  b.C_L = 1.0;
  b.k = 1.0;
  b.log_factor = 1.0;
  return b;
}

double ComplexityBudget::eta() const { return std::pow(epsilon, k) / (4.0 * C_L); }

double ComplexityBudget::log_term() const {
  return log_factor ? *log_factor : std::log(2.0 / delta);
}

double ComplexityBudget::log_term_multi() const {
  return log_factor ? *log_factor : std::log(2.0 * M / delta);
}

BigReal BigReal::from_log10(double l) {
  BigReal r;
  r.log10 = l;
  r.value = l > std::numeric_limits<double>::max_exponent10 ? std::numeric_limits<double>::infinity()
                                                            : std::pow(10.0, l);
  return r;
}

double eta_lipschitz(double epsilon, double C_L) {
  require_positive(epsilon, "eta_lipschitz: epsilon must be > 0");
  require_positive(C_L, "eta_lipschitz: C_L must be > 0");
  return epsilon / (4.0 * C_L);
}

double c_const(int m, double L, double eta) {
  if (m < 1) throw std::invalid_argument("c_const: m must be >= 1");
  require_positive(L, "c_const: L must be > 0");
  require_positive(eta, "c_const: eta must be > 0");
  return 4.0 * m * L * L / (std::numbers::pi * std::numbers::pi * eta * eta);
}

long long lambda_min(double B, double C, int m, double epsilon) {
  require_positive(B, "lambda_min: B must be > 0");
  require_positive(C, "lambda_min: C must be > 0");
  require_positive(epsilon, "lambda_min: epsilon must be > 0");
  if (m < 1) throw std::invalid_argument("lambda_min: m must be >= 1");
  const double l10 = (std::log10(4.0 * B / epsilon) + m * std::log10(C)) / m;
  const double v = std::pow(10.0, l10);
  // Guard against pow round-off pushing an exact integer up by one.
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, r)) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(v));
}

BigReal n_fejer(const ComplexityBudget& b) {
  b.validate();
  if (b.m < 1) throw std::invalid_argument("n_fejer: m must be >= 1");
  const double c = c_const(b.m, b.L, b.eta());
  return BigReal::from_log10(std::log10(32.0) + 4.0 * std::log10(b.B) + 2.0 * b.m * std::log10(c) -
                             4.0 * std::log10(b.epsilon) + std::log10(b.log_term()));
}

BigReal n_fejer_multi(const ComplexityBudget& b) {
  b.validate();
  if (b.m < 1) throw std::invalid_argument("n_fejer_multi: m must be >= 1");
  const double c = c_const(b.m, b.L, b.eta());
  return BigReal::from_log10(std::log10(32.0) + 4.0 * std::log10(b.B) + 2.0 * b.m * std::log10(c) -
                             4.0 * std::log10(b.epsilon) + std::log10(b.log_term_multi()));
}

double c_gaussian(const ComplexityBudget& b) {
  b.validate();
  if (b.m < 1) throw std::invalid_argument("c_gaussian: m must be >= 1");
  const double eta = b.eta();
  const double lg = std::log(2.0 * b.m * b.B / b.epsilon);
  if (!(lg > 0.0)) throw std::invalid_argument("c_gaussian: 2 m B / epsilon must exceed 1");
  return b.m * b.L * b.L / (std::numbers::pi * eta * eta) * lg;
}

BigReal n_gaussian(const ComplexityBudget& b) {
  if (b.m < 2) throw std::invalid_argument("n_gaussian: requires m >= 2");
  const double cg = c_gaussian(b);
  return BigReal::from_log10(std::log10(2.0) + 2.0 * std::log10(b.B) + b.m * std::log10(cg) -
                             2.0 * std::log10(b.epsilon) + std::log10(b.log_term()));
}

BigReal n_prior(const ComplexityBudget& b) {
  b.validate();
  return BigReal::from_log10(2.0 * std::log10(b.B) - 2.0 * std::log10(b.epsilon) +
                             std::log10(2.0 * b.m + 1.0) / (b.epsilon * b.epsilon));
}

BigReal compare_ratio(const ComplexityBudget& b, KernelKind kind) {
  const BigReal prior = n_prior(b);
  BigReal n;
  switch (kind) {
    case KernelKind::Fejer:
      n = n_fejer(b);
      break;
    case KernelKind::GaussianPeriodic:
      n = n_gaussian(b);
      break;
    default:
      throw std::invalid_argument("compare_ratio: kernel kind has no sample-complexity formula");
  }
  return BigReal::from_log10(n.log10 - prior.log10);
}

double n_pointwise(double B, int lambda, int m, double epsilon, double delta) {
  require_positive(B, "n_pointwise: B must be > 0");
  require_positive(epsilon, "n_pointwise: epsilon must be > 0");
  if (lambda < 1 || m < 1) throw std::invalid_argument("n_pointwise: lambda, m must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("n_pointwise: delta in (0,1)");
  return 2.0 * B * B * std::pow(static_cast<double>(lambda), 2 * m) / (epsilon * epsilon) *
         std::log(2.0 / delta);
}

}  // namespace pgk
