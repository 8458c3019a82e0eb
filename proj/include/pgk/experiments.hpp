#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgk/estimator.hpp"
#include "pgk/kernels.hpp"
#include "pgk/xy_model.hpp"

namespace pgk {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { Energy, Correlation, Density };

const char* to_string(Task t);

/// Maps a box coordinate x in [-L/2, L/2) to a physical parameter in [lo, hi].
///   periodic: lo + (x + L/2)/L (hi - lo)     (the endpoints are identified)
///   reflect:  lo + |x|/(L/2) (hi - lo)        (even in x, continuous on the circle)
struct AxisMap {
  enum class Mode { Periodic, Reflect };
  std::string name = "h";  // "h" (h/J) or "gamma"
  double lo = -1.5;
  double hi = 1.5;
  Mode mode = Mode::Periodic;

  double to_physical(double x, double side) const;
};

struct ExperimentConfig {
  Task task = Task::Energy;

  // Kernel.
  KernelKind kernel = KernelKind::Fejer;
  int lambda = 50;
  double bandwidth = 0.01;

  // Parameter box and its physical meaning (one axis per dimension).
  int m = 1;
  double L = 3.0;
  std::vector<AxisMap> axes;

  // Model; the gamma/h fields are used for coordinates without an axis.
  XYParams model;

  std::vector<std::size_t> sweep;
  int runs = 30;
  int grid = 1000;
  std::uint64_t seed = 20240601;
  std::string output;  // path prefix; empty = no files
  bool renormalize = false;

  /// Defaults for each task (Fejer lambda = 50, n = 5, gamma = 1/3, 30 runs,
  /// grid 1000, sweep 1e3 ... 1e6).
  static ExperimentConfig defaults(Task task);

  /// Parses JSON text; missing fields take the task defaults. Throws ConfigError.
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;

  /// Throws ConfigError.
  void validate() const;

  KernelSpec make_kernel() const;
  ParamSpace make_space() const;
  /// Physical model parameters at a box point.
  XYParams physical(const ParamPoint& x) const;
};

struct ScalingRow {
  std::size_t N = 0;
  int run_id = 0;
  double sup_error = 0.0;
  double trace_max_dev = 0.0;
  std::uint64_t seed = 0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct SweepStat {
  std::size_t N = 0;
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean over runs
  double median = 0.0;
  double mean_trace_dev = 0.0;
  double median_trace_dev = 0.0;
};

struct CurvePoint {
  double x = 0.0;  // physical coordinate of the first axis
  double truth = 0.0;
  double prediction = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;  // ordered by (N, run_id)
  std::vector<SweepStat> per_n;
  LogLogFit fit;
  std::vector<CurvePoint> curve;  // m = 1 scalar tasks, largest N, run 0
};

/// Ordinary least squares of log10(1/eps) on log10(N). Requires >= 3 points,
/// all positive. A zero-variance response gives slope 0 and R^2 = 0.
LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& points);

/// Per-qubit ground-state energy E_0/n at a box point.
double energy_label(const ExperimentConfig& cfg, const ParamPoint& x);
/// Long-range order lim <S^x_0 S^x_r> at a box point.
double correlation_label(const ExperimentConfig& cfg, const ParamPoint& x);
/// Ground-state density matrix at a box point.
DensityMatrix density_label(const ExperimentConfig& cfg, const ParamPoint& x);

/// Training set of size N drawn with `seed` and labelled by the task oracle.
TrainingSet make_training_set(const ExperimentConfig& cfg, std::size_t N, std::uint64_t seed);

/// Seed of run `run_id` at sample size N.
std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t N, int run_id);

ScalingResult run_energy_experiment(const ExperimentConfig& cfg);
ScalingResult run_correlation_experiment(const ExperimentConfig& cfg);
ScalingResult run_density_experiment(const ExperimentConfig& cfg);
/// Dispatches on cfg.task.
ScalingResult run_experiment(const ExperimentConfig& cfg);

/// Writes <prefix>.csv, <prefix>.json and, when present, <prefix>_curve.csv.
void write_outputs(const ScalingResult& result, const ExperimentConfig& cfg,
                   const std::string& prefix);

std::string scaling_csv(const ScalingResult& result);
std::string curve_csv(const ScalingResult& result);
std::string sidecar_json(const ScalingResult& result, const ExperimentConfig& cfg);

}  // namespace pgk
