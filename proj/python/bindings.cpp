#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgk/complexity.hpp"
#include "pgk/estimator.hpp"
#include "pgk/experiments.hpp"
#include "pgk/kernels.hpp"
#include "pgk/rkhs.hpp"
#include "pgk/xy_model.hpp"

namespace py = pybind11;
using namespace pgk;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (count, m) array or a flat array for m = 1.
std::vector<ParamPoint> to_points(const Points& a, int m) {
  const auto buf = a.request();
  std::size_t rows = 0;
  if (buf.ndim == 1 && m == 1) {
    rows = static_cast<std::size_t>(buf.shape[0]);
  } else if (buf.ndim == 2 && buf.shape[1] == m) {
    rows = static_cast<std::size_t>(buf.shape[0]);
  } else {
    throw std::invalid_argument("points must have shape (count, m)");
  }
  const double* p = static_cast<const double*>(buf.ptr);
  std::vector<ParamPoint> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i].coords.assign(p + i * m, p + (i + 1) * m);
  return out;
}

py::array_t<double> from_points(const std::vector<ParamPoint>& pts, int m) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), static_cast<py::ssize_t>(m)});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < m; ++j) r(i, j) = pts[i][j];
  }
  return out;
}

py::dict result_dict(const ScalingResult& r) {
  py::list rows, per_n, curve;
  for (const auto& x : r.rows) {
    rows.append(py::dict(py::arg("N") = x.N, py::arg("run_id") = x.run_id, py::arg("sup_error") = x.sup_error,
                         py::arg("trace_max_dev") = x.trace_max_dev, py::arg("seed") = x.seed));
  }
  for (const auto& s : r.per_n) {
    per_n.append(py::dict(py::arg("N") = s.N, py::arg("mean") = s.mean, py::arg("std_error") = s.std_error,
                          py::arg("median") = s.median, py::arg("mean_trace_dev") = s.mean_trace_dev,
                          py::arg("median_trace_dev") = s.median_trace_dev));
  }
  for (const auto& c : r.curve) {
    curve.append(py::make_tuple(c.x, c.truth, c.prediction));
  }
  py::dict fit(py::arg("slope") = r.fit.slope, py::arg("intercept") = r.fit.intercept,
               py::arg("r_squared") = r.fit.r_squared);
  return py::dict(py::arg("rows") = rows, py::arg("per_n") = per_n, py::arg("fit") = fit,
                  py::arg("curve") = curve);
}

ComplexityBudget make_budget(double epsilon, double delta, int m, double L, double B, double C_L, int M, double k,
                             std::optional<double> log_factor) {
  ComplexityBudget b;
  b.epsilon = epsilon;
  b.delta = delta;
  b.m = m;
  b.L = L;
  b.B = B;
  b.C_L = C_L;
  b.M = M;
  b.k = k;
  b.log_factor = log_factor;
  b.validate();
  return b;
}

}  // namespace

PYBIND11_MODULE(_pgk, m) {
  m.doc() = "Positive-good-kernel learning of parametrized quantum states";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // Parameter space (uniform density).
  py::class_<ParamSpace>(m, "ParamSpace")
      .def(py::init<int, double>(), py::arg("m"), py::arg("side"))
      .def_property_readonly("m", &ParamSpace::dim)
      .def_property_readonly("side", &ParamSpace::side);
  m.def("sample", [](const ParamSpace& s, std::size_t count, std::uint64_t seed) {
    return from_points(sample(s, count, seed), s.dim());
  }, py::arg("space"), py::arg("count"), py::arg("seed"));
  m.def("grid", [](const ParamSpace& s, int p) { return from_points(grid(s, p), s.dim()); },
        py::arg("space"), py::arg("points_per_dim"));

  // Kernels.
  py::enum_<KernelKind>(m, "KernelKind")
      .value("Fejer", KernelKind::Fejer)
      .value("Dirichlet", KernelKind::Dirichlet)
      .value("GaussianPeriodic", KernelKind::GaussianPeriodic)
      .value("Weighted", KernelKind::Weighted);
  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("fejer", &KernelSpec::fejer, py::arg("space"), py::arg("lam"))
      .def_static("dirichlet", &KernelSpec::dirichlet, py::arg("space"), py::arg("lam"))
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("space"), py::arg("bandwidth"))
      .def_property_readonly("kind", &KernelSpec::kind)
      .def_property_readonly("lam", &KernelSpec::lambda)
      .def_property_readonly("bandwidth", &KernelSpec::bandwidth)
      .def_property_readonly("is_positive", &KernelSpec::is_positive)
      .def("at_origin", &KernelSpec::at_origin)
      .def("__call__", [](const KernelSpec& k, const Points& x) {
        const auto pts = to_points(x, k.space().dim());
        py::array_t<double> out(static_cast<py::ssize_t>(pts.size()));
        auto r = out.mutable_unchecked<1>();
        for (std::size_t i = 0; i < pts.size(); ++i) r(i) = k(pts[i]);
        return out;
      }, py::arg("x"), "Kernel values at displacements of shape (count, m).");
  m.def("verify_pgk", [](const KernelSpec& k, std::vector<double> etas, int q) {
    const PgkReport r = verify_pgk(k, etas, q);
    return py::dict(py::arg("min_value") = r.min_value, py::arg("sup_value") = r.sup_value,
                    py::arg("normalization") = r.normalization, py::arg("tail_integrals") = r.tail_integrals,
                    py::arg("fitted_tail_exponent") = r.fitted_tail_exponent,
                    py::arg("fitted_sup_exponent") = r.fitted_sup_exponent, py::arg("passed") = r.passed);
  }, py::arg("spec"), py::arg("etas"), py::arg("quadrature_points") = 10000);

  // XY chain.
  py::class_<XYParams>(m, "XYParams")
      .def(py::init([](int n, double J, double gamma, double h) {
        XYParams p;
        p.n = n;
        p.J = J;
        p.gamma = gamma;
        p.h_over_J = h;
        p.validate();
        return p;
      }), py::arg("n") = 5, py::arg("J") = 1.0, py::arg("gamma") = 1.0 / 3.0, py::arg("h_over_J") = 0.0)
      .def_readwrite("n", &XYParams::n)
      .def_readwrite("J", &XYParams::J)
      .def_readwrite("gamma", &XYParams::gamma)
      .def_readwrite("h_over_J", &XYParams::h_over_J);
  m.def("ground_energy_ff", &ground_energy_ff, py::arg("params"));
  m.def("ground_energy_ed", &ground_energy_ed, py::arg("params"));
  m.def("ground_state_ed", [](const XYParams& p) {
    const EdGroundState gs = ground_state_ed(p);
    return py::make_tuple(gs.energy, py::cast(CMatrix(gs.rho.matrix()), py::return_value_policy::move),
                          gs.degeneracy);
  }, py::arg("params"), "Returns (energy, density matrix, degeneracy).");
  m.def("sector_crossings", &sector_crossings, py::arg("params"), py::arg("h_lo"), py::arg("h_hi"),
        py::arg("resolution") = 1000);
  m.def("longrange_xx", [](double gamma, double h) {
    const LongRangeOrder r = longrange_xx(gamma, h);
    return py::make_tuple(r.value, r.converged);
  }, py::arg("gamma"), py::arg("h_over_J"), "Returns (value, converged).");
  m.def("longrange_xx_closed_form", &longrange_xx_closed_form, py::arg("gamma"), py::arg("h_over_J"));

  // Estimators.
  m.def("predict_scalar", [](const KernelSpec& k, const Points& pts, std::vector<double> labels,
                             const Points& queries, bool renormalize) {
    const int dim = k.space().dim();
    const TrainingSet set = TrainingSet::scalar(to_points(pts, dim), std::move(labels));
    PredictOptions o;
    o.renormalize = renormalize;
    const auto q = to_points(queries, dim);
    py::array_t<double> out(static_cast<py::ssize_t>(q.size()));
    auto r = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < q.size(); ++i) r(i) = predict_scalar(q[i], set, k, o);
    return out;
  }, py::arg("spec"), py::arg("points"), py::arg("labels"), py::arg("queries"), py::arg("renormalize") = false);
  m.def("predict_density", [](const KernelSpec& k, const Points& pts, std::vector<CMatrix> rhos,
                              std::vector<double> x, bool renormalize) {
    std::vector<DensityMatrix> labels;
    labels.reserve(rhos.size());
    for (auto& r : rhos) labels.emplace_back(std::move(r));
    const TrainingSet set = TrainingSet::density(to_points(pts, k.space().dim()), std::move(labels));
    PredictOptions o;
    o.renormalize = renormalize;
    return predict_density(ParamPoint{std::move(x)}, set, k, o);
  }, py::arg("spec"), py::arg("points"), py::arg("rhos"), py::arg("x"), py::arg("renormalize") = false);
  m.def("validate_density", [](const CMatrix& rho, double tol) { return validate(rho, tol).passed(); },
        py::arg("rho"), py::arg("tol") = 1e-10);

  // Complexity (all sample sizes as log10).
  m.def("compare_ratio_log10", [](double epsilon, double delta, int m_, double L, double B, double C_L, int M,
                                  double k, std::optional<double> log_factor, const std::string& kernel) {
    const ComplexityBudget b = make_budget(epsilon, delta, m_, L, B, C_L, M, k, log_factor);
    if (kernel == "fejer") return compare_ratio(b, KernelKind::Fejer).log10;
    if (kernel == "gaussian") return compare_ratio(b, KernelKind::GaussianPeriodic).log10;
    throw std::invalid_argument("kernel must be 'fejer' or 'gaussian'");
  }, py::arg("epsilon") = 0.1, py::arg("delta") = 0.05, py::arg("m") = 2, py::arg("L") = 2.0, py::arg("B") = 100.0,
     py::arg("C_L") = 1.0, py::arg("M") = 100, py::arg("k") = 1.0, py::arg("log_factor") = 1.0,
     py::arg("kernel") = "fejer");
  m.def("n_fejer_log10", [](double epsilon, double delta, int m_, double L, double B, double C_L,
                            std::optional<double> log_factor) {
    return n_fejer(make_budget(epsilon, delta, m_, L, B, C_L, 1, 1.0, log_factor)).log10;
  }, py::arg("epsilon"), py::arg("delta"), py::arg("m"), py::arg("L"), py::arg("B"), py::arg("C_L") = 1.0,
     py::arg("log_factor") = py::none());
  m.def("c_const", &c_const, py::arg("m"), py::arg("L"), py::arg("eta"));
  m.def("lambda_min", &lambda_min, py::arg("B"), py::arg("C"), py::arg("m"), py::arg("epsilon"));

  // RKHS bounds.
  m.def("generalization_bound", [](const KernelSpec& k, double B, std::size_t N, double delta, double empirical,
                                   const std::string& variant) {
    const RkhsBoundInputs in = RkhsBoundInputs::for_kernel(k, B, N, delta);
    if (variant != "radius" && variant != "trace") throw std::invalid_argument("variant: 'radius' or 'trace'");
    return generalization_bound(in, empirical, variant == "radius" ? BoundVariant::Radius : BoundVariant::Trace);
  }, py::arg("spec"), py::arg("B"), py::arg("N"), py::arg("delta"), py::arg("empirical"),
     py::arg("variant") = "radius");
  m.def("n_rkhs", &n_rkhs, py::arg("epsilon"), py::arg("lambda_f"), py::arg("R"), py::arg("delta"));

  // Experiments (JSON configuration in, plain dicts out).
  m.def("default_config", [](const std::string& task) {
    if (task == "energy") return ExperimentConfig::defaults(Task::Energy).to_json();
    if (task == "correlation") return ExperimentConfig::defaults(Task::Correlation).to_json();
    if (task == "density") return ExperimentConfig::defaults(Task::Density).to_json();
    throw ConfigError("unknown task '" + task + "'");
  }, py::arg("task") = "energy");
  m.def("run_experiment", [](const std::string& config_json) {
    const ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
    ScalingResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(cfg);
    }
    if (!cfg.output.empty()) write_outputs(r, cfg, cfg.output);
    return result_dict(r);
  }, py::arg("config_json"), "Runs a sweep; writes CSV/JSON outputs when the config names an output prefix.");
  m.def("loglog_fit", [](const std::vector<std::pair<double, double>>& pts) {
    const LogLogFit f = loglog_fit(pts);
    return py::make_tuple(f.slope, f.intercept, f.r_squared);
  }, py::arg("points"));
}
