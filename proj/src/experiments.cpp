#include "pgk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pgk/numeric.hpp"

namespace pgk {

using nlohmann::json;

namespace {

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Index of a lattice midpoint in grid() order.
std::size_t lattice_index(const ParamPoint& x, double side, int p) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const double u = (x[j] + 0.5 * side) / side * p;
    const auto i = static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(u)), 0, p - 1));
    idx = idx * static_cast<std::size_t>(p) + i;
  }
  return idx;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::Fejer: return "fejer";
    case KernelKind::Dirichlet: return "dirichlet";
    case KernelKind::GaussianPeriodic: return "gaussian";
    case KernelKind::Weighted: return "weighted";
  }
  return "?";
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "fejer") return KernelKind::Fejer;
  if (s == "dirichlet") return KernelKind::Dirichlet;
  if (s == "gaussian") return KernelKind::GaussianPeriodic;
  throw ConfigError("unknown kernel '" + s + "' (expected fejer, gaussian or dirichlet)");
}

Task parse_task(const std::string& s) {
  if (s == "energy") return Task::Energy;
  if (s == "correlation") return Task::Correlation;
  if (s == "density") return Task::Density;
  throw ConfigError("unknown task '" + s + "' (expected energy, correlation or density)");
}

AxisMap::Mode parse_mode(const std::string& s) {
  if (s == "periodic") return AxisMap::Mode::Periodic;
  if (s == "reflect") return AxisMap::Mode::Reflect;
  throw ConfigError("unknown axis map '" + s + "' (expected periodic or reflect)");
}

std::vector<std::size_t> default_sweep(std::size_t max_n) {
  std::vector<std::size_t> out;
  for (std::size_t n : {1000, 3000, 10000, 30000, 100000, 300000, 1000000}) {
    if (n <= max_n) out.push_back(n);
  }
  return out;
}

struct RunOutcome {
  PredictionDiagnostics diag;
  std::vector<CurvePoint> curve;
};

// Scalar predictions on the lattice (series path for Fejer kernels).
std::vector<double> lattice_predictions(const TrainingSet& set, const KernelSpec& spec, int p,
                                        bool renormalize) {
  const std::vector<ParamPoint> lattice = grid(spec.space(), p);
  std::vector<double> out(lattice.size());
  if (FejerSeries::supports(spec)) {
    const auto n = static_cast<Eigen::Index>(set.size());
    Eigen::MatrixXd w(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i, 0) = set.scalar_labels()[static_cast<std::size_t>(i)] / static_cast<double>(n);
      w(i, 1) = 1.0 / static_cast<double>(n);
    }
    const Eigen::MatrixXcd v = FejerSeries(spec, set.points(), w).evaluate_lattice(p);
    for (std::size_t g = 0; g < out.size(); ++g) {
      const auto r = static_cast<Eigen::Index>(g);
      out[g] = renormalize ? v(r, 0).real() / v(r, 1).real() : v(r, 0).real();
    }
  } else {
    PredictOptions opts;
    opts.renormalize = renormalize;
    for (std::size_t g = 0; g < out.size(); ++g) out[g] = predict_scalar(lattice[g], set, spec, opts);
  }
  return out;
}

ScalingResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const KernelSpec spec = cfg.make_kernel();
  const std::vector<ParamPoint> lattice = grid(spec.space(), cfg.grid);
  const double side = cfg.L;
  const int p = cfg.grid;

  // Truth on the lattice, computed once.
  std::vector<double> truth_scalar;
  std::vector<CMatrix> truth_matrix;
  if (cfg.task == Task::Density) {
    truth_matrix.resize(lattice.size());
    parallel_for(lattice.size(), [&](std::size_t g) {
      truth_matrix[g] = density_label(cfg, lattice[g]).matrix();
    });
  } else {
    truth_scalar.resize(lattice.size());
    parallel_for(lattice.size(), [&](std::size_t g) {
      truth_scalar[g] = cfg.task == Task::Energy ? energy_label(cfg, lattice[g])
                                                 : correlation_label(cfg, lattice[g]);
    });
  }
  const ScalarTruth scalar_truth = [&](const ParamPoint& x) {
    return truth_scalar[lattice_index(x, side, p)];
  };
  const MatrixTruth matrix_truth = [&](const ParamPoint& x) {
    return truth_matrix[lattice_index(x, side, p)];
  };

  PredictOptions opts;
  opts.renormalize = cfg.renormalize;
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  const std::size_t jobs = cfg.sweep.size() * runs;
  const auto largest = static_cast<std::size_t>(
      std::max_element(cfg.sweep.begin(), cfg.sweep.end()) - cfg.sweep.begin());
  std::vector<RunOutcome> outcomes(jobs);

  parallel_for(jobs, [&](std::size_t j) {
    const std::size_t N = cfg.sweep[j / runs];
    const int run = static_cast<int>(j % runs);
    const TrainingSet set = make_training_set(cfg, N, run_seed(cfg, N, run));
    RunOutcome& out = outcomes[j];
    if (cfg.task == Task::Density) {
      out.diag = sup_error_density(set, spec, matrix_truth, p, opts);
      return;
    }
    out.diag = sup_error_scalar(set, spec, scalar_truth, p, opts);
    if (cfg.m == 1 && run == 0 && j / runs == largest) {
      const std::vector<double> pred = lattice_predictions(set, spec, p, cfg.renormalize);
      out.curve.resize(lattice.size());
      for (std::size_t g = 0; g < lattice.size(); ++g) {
        out.curve[g] = {cfg.axes[0].to_physical(lattice[g][0], side), truth_scalar[g], pred[g]};
      }
    }
  });

  ScalingResult result;
  for (std::size_t s = 0; s < cfg.sweep.size(); ++s) {
    const std::size_t N = cfg.sweep[s];
    std::vector<double> errs, traces;
    for (std::size_t r = 0; r < runs; ++r) {
      const RunOutcome& o = outcomes[s * runs + r];
      result.rows.push_back({N, static_cast<int>(r), o.diag.sup_error, o.diag.trace_max_dev,
                             run_seed(cfg, N, static_cast<int>(r))});
      errs.push_back(o.diag.sup_error);
      traces.push_back(o.diag.trace_max_dev);
      if (!o.curve.empty()) result.curve = o.curve;
    }
    SweepStat st;
    st.N = N;
    CompensatedSum sum, tsum;
    for (double e : errs) sum.add(e);
    for (double t : traces) tsum.add(t);
    st.mean = sum.value() / static_cast<double>(runs);
    st.mean_trace_dev = tsum.value() / static_cast<double>(runs);
    if (runs > 1) {
      CompensatedSum ss;
      for (double e : errs) ss.add((e - st.mean) * (e - st.mean));
      st.std_error = std::sqrt(ss.value() / static_cast<double>(runs - 1) / static_cast<double>(runs));
    }
    st.median = median(errs);
    st.median_trace_dev = median(traces);
    result.per_n.push_back(st);
  }
  if (result.per_n.size() >= 3) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& st : result.per_n) pts.emplace_back(static_cast<double>(st.N), st.mean);
    result.fit = loglog_fit(pts);
  }
  return result;
}

}  // namespace

const char* to_string(Task t) {
  switch (t) {
    case Task::Energy: return "energy";
    case Task::Correlation: return "correlation";
    case Task::Density: return "density";
  }
  return "?";
}

double AxisMap::to_physical(double x, double side) const {
  const double u = mode == Mode::Periodic ? (wrap_coordinate(x, side) + 0.5 * side) / side
                                          : std::abs(wrap_coordinate(x, side)) / (0.5 * side);
  return lo + u * (hi - lo);
}

ExperimentConfig ExperimentConfig::defaults(Task task) {
  ExperimentConfig c;
  c.task = task;
  c.model.n = 5;
  c.model.J = 1.0;
  c.model.gamma = 1.0 / 3.0;
  c.model.h_over_J = 0.0;
  switch (task) {
    case Task::Energy:
      c.axes = {AxisMap{"h", -1.5, 1.5, AxisMap::Mode::Periodic}};
      c.sweep = default_sweep(1000000);
      break;
    case Task::Correlation:
      c.m = 2;
      c.axes = {AxisMap{"h", -1.5, 1.5, AxisMap::Mode::Periodic},
                AxisMap{"gamma", 0.0, 1.0, AxisMap::Mode::Reflect}};
      c.sweep = default_sweep(100000);
      break;
    case Task::Density:
      c.model.n = 3;
      c.axes = {AxisMap{"h", 1.1, 2.5, AxisMap::Mode::Reflect}};
      c.sweep = default_sweep(100000);
      break;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    ExperimentConfig c = defaults(parse_task(j.value("task", std::string("energy"))));
    if (j.contains("kernel")) {
      const json& k = j.at("kernel");
      c.kernel = parse_kernel(k.value("kind", std::string(kernel_name(c.kernel))));
      c.lambda = k.value("lambda", c.lambda);
      c.bandwidth = k.value("bandwidth", c.bandwidth);
    }
    if (j.contains("space")) {
      const json& s = j.at("space");
      const int old_m = c.m;
      c.m = s.value("m", c.m);
      c.L = s.value("L", c.L);
      if (s.contains("axes")) {
        c.axes.clear();
        for (const json& a : s.at("axes")) {
          AxisMap ax;
          ax.name = a.value("name", std::string("h"));
          ax.lo = a.at("lo").get<double>();
          ax.hi = a.at("hi").get<double>();
          ax.mode = parse_mode(a.value("map", std::string("periodic")));
          c.axes.push_back(ax);
        }
      } else if (c.m != old_m) {
        c.axes.resize(static_cast<std::size_t>(std::max(c.m, 0)));
      }
    }
    if (j.contains("model")) {
      const json& mdl = j.at("model");
      c.model.n = mdl.value("n", c.model.n);
      c.model.J = mdl.value("J", c.model.J);
      c.model.gamma = mdl.value("gamma", c.model.gamma);
      c.model.h_over_J = mdl.value("h_over_J", c.model.h_over_J);
    }
    if (j.contains("sweep")) c.sweep = j.at("sweep").get<std::vector<std::size_t>>();
    c.runs = j.value("runs", c.runs);
    c.grid = j.value("grid", c.grid);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
    c.renormalize = j.value("renormalize", c.renormalize);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

std::string ExperimentConfig::to_json() const {
  json axes_j = json::array();
  for (const auto& a : axes) {
    axes_j.push_back({{"name", a.name},
                      {"lo", a.lo},
                      {"hi", a.hi},
                      {"map", a.mode == AxisMap::Mode::Periodic ? "periodic" : "reflect"}});
  }
  json j = {{"task", to_string(task)},
            {"kernel", {{"kind", kernel_name(kernel)}, {"lambda", lambda}, {"bandwidth", bandwidth}}},
            {"space", {{"m", m}, {"L", L}, {"axes", axes_j}}},
            {"model", {{"n", model.n}, {"J", model.J}, {"gamma", model.gamma},
                       {"h_over_J", model.h_over_J}}},
            {"sweep", sweep},
            {"runs", runs},
            {"grid", grid},
            {"seed", seed},
            {"output", output},
            {"renormalize", renormalize}};
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (sweep.empty()) throw ConfigError("sweep must list at least one N");
  for (std::size_t n : sweep) {
    if (n < 1) throw ConfigError("every N in the sweep must be >= 1");
  }
  if (grid < 2) throw ConfigError("grid must be >= 2 points per dimension");
  if (m < 1 || m > 2) throw ConfigError("m must be 1 or 2");
  if (!(L > 0.0)) throw ConfigError("L must be > 0");
  if (axes.size() != static_cast<std::size_t>(m)) throw ConfigError("need exactly one axis per dimension");
  if (std::pow(static_cast<double>(grid), m) > 1e7) throw ConfigError("grid exceeds 1e7 points");
  for (const auto& a : axes) {
    if (a.name != "h" && a.name != "gamma") throw ConfigError("axis name must be 'h' or 'gamma'");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.hi > a.lo)) {
      throw ConfigError("axis '" + a.name + "' needs lo < hi");
    }
    if (a.name == "gamma" && (a.lo < 0.0 || a.hi > 1.0)) {
      throw ConfigError("gamma axis must lie inside [0, 1]");
    }
  }
  if (m == 2 && axes[0].name == axes[1].name) throw ConfigError("axes must be distinct");
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (task == Task::Energy && model.n > 64) throw ConfigError("energy task supports n <= 64");
  if (task == Task::Density) {
    if (model.n > 6) throw ConfigError("density task supports n <= 6");
    if (kernel == KernelKind::Dirichlet) throw ConfigError("density task requires a positive kernel");
  }
  if (kernel == KernelKind::Dirichlet && m != 1) throw ConfigError("dirichlet kernel is 1-D only");
  if (kernel == KernelKind::GaussianPeriodic && !(bandwidth > 0.0 && bandwidth < L / 2)) {
    throw ConfigError("gaussian bandwidth must lie in (0, L/2)");
  }
  if (kernel != KernelKind::GaussianPeriodic && lambda < 1) throw ConfigError("lambda must be >= 1");
}

KernelSpec ExperimentConfig::make_kernel() const {
  const ParamSpace space = make_space();
  switch (kernel) {
    case KernelKind::Dirichlet: return KernelSpec::dirichlet(space, lambda);
    case KernelKind::GaussianPeriodic: return KernelSpec::gaussian(space, bandwidth);
    default: return KernelSpec::fejer(space, lambda);
  }
}

ParamSpace ExperimentConfig::make_space() const { return ParamSpace(m, L); }

XYParams ExperimentConfig::physical(const ParamPoint& x) const {
  XYParams p = model;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    const double v = axes[j].to_physical(x[j], L);
    if (axes[j].name == "h") {
      p.h_over_J = v;
    } else {
      p.gamma = std::clamp(v, 0.0, 1.0);
    }
  }
  return p;
}

LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("loglog_fit: need at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [n, e] : points) {
    if (!(n > 0.0) || !(e > 0.0)) throw std::invalid_argument("loglog_fit: values must be positive");
    xs.push_back(std::log10(n));
    ys.push_back(-std::log10(e));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("loglog_fit: N values must not all be equal");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-300) {
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 0.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

double energy_label(const ExperimentConfig& cfg, const ParamPoint& x) {
  const XYParams p = cfg.physical(x);
  return ground_energy_ff(p) / p.n;
}

double correlation_label(const ExperimentConfig& cfg, const ParamPoint& x) {
  const XYParams p = cfg.physical(x);
  return longrange_xx_closed_form(p.gamma, p.h_over_J);
}

DensityMatrix density_label(const ExperimentConfig& cfg, const ParamPoint& x) {
  return ground_state_ed(cfg.physical(x)).rho;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t N, int run_id) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(run_id));
}

TrainingSet make_training_set(const ExperimentConfig& cfg, std::size_t N, std::uint64_t seed) {
  const ParamSpace space = cfg.make_space();
  std::vector<ParamPoint> pts = sample(space, N, seed);
  if (cfg.task == Task::Density) {
    std::vector<DensityMatrix> labels;
    labels.reserve(N);
    for (const auto& x : pts) labels.push_back(density_label(cfg, x));
    return TrainingSet::density(std::move(pts), std::move(labels), seed);
  }
  std::vector<double> labels(N);
  for (std::size_t i = 0; i < N; ++i) {
    labels[i] = cfg.task == Task::Energy ? energy_label(cfg, pts[i]) : correlation_label(cfg, pts[i]);
  }
  return TrainingSet::scalar(std::move(pts), std::move(labels), seed);
}

ScalingResult run_energy_experiment(const ExperimentConfig& cfg) {
  if (cfg.task != Task::Energy) throw ConfigError("run_energy_experiment: task must be energy");
  if (cfg.m != 1 || cfg.axes[0].name != "h") throw ConfigError("energy task uses the single h/J axis");
  return run_sweep(cfg);
}

ScalingResult run_correlation_experiment(const ExperimentConfig& cfg) {
  if (cfg.task != Task::Correlation) {
    throw ConfigError("run_correlation_experiment: task must be correlation");
  }
  return run_sweep(cfg);
}

ScalingResult run_density_experiment(const ExperimentConfig& cfg) {
  if (cfg.task != Task::Density) throw ConfigError("run_density_experiment: task must be density");
  return run_sweep(cfg);
}

ScalingResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.task) {
    case Task::Energy: return run_energy_experiment(cfg);
    case Task::Correlation: return run_correlation_experiment(cfg);
    case Task::Density: return run_density_experiment(cfg);
  }
  throw ConfigError("unknown task");
}

std::string scaling_csv(const ScalingResult& result) {
  std::ostringstream os;
  os << "N,run_id,sup_error,trace_max_dev,seed\n";
  for (const auto& r : result.rows) {
    os << r.N << ',' << r.run_id << ',' << fmt(r.sup_error) << ',' << fmt(r.trace_max_dev) << ','
       << r.seed << '\n';
  }
  return os.str();
}

std::string curve_csv(const ScalingResult& result) {
  std::ostringstream os;
  os << "x,truth,prediction\n";
  for (const auto& c : result.curve) {
    os << fmt(c.x) << ',' << fmt(c.truth) << ',' << fmt(c.prediction) << '\n';
  }
  return os.str();
}

std::string sidecar_json(const ScalingResult& result, const ExperimentConfig& cfg) {
  json per_n = json::array();
  for (const auto& s : result.per_n) {
    per_n.push_back({{"N", s.N},
                     {"mean_sup_error", s.mean},
                     {"std_error", s.std_error},
                     {"median_sup_error", s.median},
                     {"mean_trace_max_dev", s.mean_trace_dev},
                     {"median_trace_max_dev", s.median_trace_dev}});
  }
  json j = {{"fit", {{"slope", result.fit.slope},
                     {"intercept", result.fit.intercept},
                     {"r_squared", result.fit.r_squared},
                     {"x", "log10(N)"},
                     {"y", "log10(1/mean_sup_error)"}}},
            {"per_n", per_n},
            {"error_bars", "standard error of the mean over runs"},
            {"config", json::parse(cfg.to_json())}};
  return j.dump(2) + "\n";
}

void write_outputs(const ScalingResult& result, const ExperimentConfig& cfg,
                   const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
  };
  write(prefix + ".csv", scaling_csv(result));
  write(prefix + ".json", sidecar_json(result, cfg));
  if (!result.curve.empty()) write(prefix + "_curve.csv", curve_csv(result));
}

}  // namespace pgk
