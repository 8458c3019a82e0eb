#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgk/complexity.hpp"
#include "pgk/experiments.hpp"
#include "pgk/kernels.hpp"
#include "pgk/numeric.hpp"
#include "pgk/rkhs.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

struct Overrides {
  std::string config;
  std::string task;
  std::string kernel;
  int lambda = 0;
  double bandwidth = 0.0;
  int m = 0;
  double L = 0.0;
  int n = 0;
  double gamma = 0.0;
  std::vector<std::size_t> sweep;
  int runs = 0;
  int grid = 0;
  std::uint64_t seed = 0;
  std::string output;
  bool renormalize = false;
  bool check = false;
};

void add_experiment_flags(CLI::App* sub, Overrides& o, bool with_task) {
  sub->add_option("--config", o.config, "JSON experiment config");
  if (with_task) sub->add_option("--task", o.task, "energy | correlation | density");
  sub->add_option("--kernel", o.kernel, "fejer | gaussian | dirichlet");
  sub->add_option("--lambda", o.lambda, "Kernel index");
  sub->add_option("--bandwidth", o.bandwidth, "Gaussian bandwidth h");
  sub->add_option("--m", o.m, "Parameter-space dimension");
  sub->add_option("--L", o.L, "Box side length");
  sub->add_option("--n", o.n, "Number of qubits");
  sub->add_option("--gamma", o.gamma, "Anisotropy (used when gamma is not an axis)");
  sub->add_option("--sweep", o.sweep, "Sample sizes N")->delimiter(',');
  sub->add_option("--runs", o.runs, "Independent runs per N");
  sub->add_option("--grid", o.grid, "Evaluation points per dimension");
  sub->add_option("--seed", o.seed, "Base seed");
  sub->add_option("--output", o.output, "Output path prefix");
  sub->add_flag("--renormalize", o.renormalize, "Divide predictions by the trace diagnostic");
  sub->add_flag("--check", o.check, "Exit 3 when acceptance thresholds fail");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw pgk::ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

pgk::ExperimentConfig build_config(CLI::App* sub, const Overrides& o, pgk::Task fallback) {
  pgk::Task task = fallback;
  if (sub->get_option_no_throw("--task") && sub->count("--task")) {
    const std::string t = o.task;
    if (t == "energy") task = pgk::Task::Energy;
    else if (t == "correlation") task = pgk::Task::Correlation;
    else if (t == "density") task = pgk::Task::Density;
    else throw pgk::ConfigError("unknown task '" + t + "'");
  }
  pgk::ExperimentConfig c = pgk::ExperimentConfig::defaults(task);
  if (sub->count("--config")) {
    c = pgk::ExperimentConfig::from_json(read_file(o.config));
    if (sub->get_option_no_throw("--task") && sub->count("--task")) c.task = task;
  }
  if (c.task != fallback && !sub->get_option_no_throw("--task")) {
    throw pgk::ConfigError(std::string("config task '") + pgk::to_string(c.task) +
                           "' does not match this subcommand");
  }
  if (sub->count("--kernel")) {
    if (o.kernel == "fejer") c.kernel = pgk::KernelKind::Fejer;
    else if (o.kernel == "gaussian") c.kernel = pgk::KernelKind::GaussianPeriodic;
    else if (o.kernel == "dirichlet") c.kernel = pgk::KernelKind::Dirichlet;
    else throw pgk::ConfigError("unknown kernel '" + o.kernel + "'");
  }
  if (sub->count("--lambda")) c.lambda = o.lambda;
  if (sub->count("--bandwidth")) c.bandwidth = o.bandwidth;
  if (sub->count("--m") && o.m != c.m) {
    c.m = o.m;
    // Keep the leading axes; the h/J axis comes first in every default.
    if (c.m == 1) {
      c.axes.resize(1);
    } else if (c.m == 2 && c.axes.size() == 1) {
      c.axes.push_back({"gamma", 0.0, 1.0, pgk::AxisMap::Mode::Reflect});
    }
  }
  if (sub->count("--L")) c.L = o.L;
  if (sub->count("--n")) c.model.n = o.n;
  if (sub->count("--gamma")) c.model.gamma = o.gamma;
  if (sub->count("--sweep")) c.sweep = o.sweep;
  if (sub->count("--runs")) c.runs = o.runs;
  if (sub->count("--grid")) c.grid = o.grid;
  if (sub->count("--seed")) c.seed = o.seed;
  if (sub->count("--output")) c.output = o.output;
  if (sub->count("--renormalize")) c.renormalize = o.renormalize;
  c.validate();
  return c;
}

void print_result(const pgk::ScalingResult& r) {
  std::printf("%10s %14s %12s %14s %16s\n", "N", "mean_sup_err", "std_error", "median", "median_trace_dev");
  for (const auto& s : r.per_n) {
    std::printf("%10zu %14.6g %12.3g %14.6g %16.6g\n", s.N, s.mean, s.std_error, s.median,
                s.median_trace_dev);
  }
  if (r.per_n.size() >= 3) {
    std::printf("fit log10(1/eps) = %.4f log10(N) + %.4f, R^2 = %.4f\n", r.fit.slope,
                r.fit.intercept, r.fit.r_squared);
  }
}

// Acceptance thresholds per task; returns false when --check should fail.
bool check_result(const pgk::ExperimentConfig& c, const pgk::ScalingResult& r) {
  bool ok = true;
  if (c.task == pgk::Task::Energy || (c.task == pgk::Task::Correlation && c.m == 2)) {
    const double r2_min = c.task == pgk::Task::Energy ? 0.95 : 0.90;
    ok = r.per_n.size() >= 3 && r.fit.slope >= 0.35 && r.fit.slope <= 0.55 &&
         r.fit.r_squared >= r2_min;
    std::printf("check: slope in [0.35, 0.55], R^2 >= %.2f: %s\n", r2_min, ok ? "pass" : "FAIL");
  } else if (c.task == pgk::Task::Correlation) {
    double worst = 0.0;
    for (const auto& p : r.curve) {
      if (std::abs(std::abs(p.x) - 1.0) > 0.05) worst = std::max(worst, std::abs(p.prediction - p.truth));
    }
    ok = !r.curve.empty() && worst <= 0.02;
    std::printf("check: sup error outside |h/J| in [0.95, 1.05] = %.4g <= 0.02: %s\n", worst,
                ok ? "pass" : "FAIL");
  } else {
    for (std::size_t i = 1; i < r.per_n.size(); ++i) {
      ok = ok && r.per_n[i].median <= r.per_n[i - 1].median &&
           r.per_n[i].median_trace_dev <= r.per_n[i - 1].median_trace_dev;
    }
    std::printf("check: median sup error and trace deviation non-increasing: %s\n",
                ok ? "pass" : "FAIL");
  }
  return ok;
}

int run_learn(CLI::App* sub, const Overrides& o, pgk::Task task) {
  const pgk::ExperimentConfig c = build_config(sub, o, task);
  const pgk::ScalingResult r = pgk::run_experiment(c);
  print_result(r);
  if (!c.output.empty()) {
    pgk::write_outputs(r, c, c.output);
    std::printf("wrote %s.csv, %s.json%s\n", c.output.c_str(), c.output.c_str(),
                r.curve.empty() ? "" : (", " + c.output + "_curve.csv").c_str());
  }
  if (o.check && !check_result(c, r)) return kExitCheck;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-good-kernel learning of XY-chain ground-state properties"};
  app.require_subcommand(1);

  // verify-kernels
  auto* vk = app.add_subcommand("verify-kernels", "Check positivity, normalization, eta-convergence");
  std::string vk_kernel = "fejer";
  int vk_m = 1;
  double vk_L = 2.0;
  std::vector<double> vk_index = {8, 16, 32, 64, 128, 256};
  std::vector<double> vk_etas;
  int vk_q = 0;
  bool vk_check = false;
  vk->add_option("--kernel", vk_kernel, "fejer | gaussian | dirichlet");
  vk->add_option("--m", vk_m, "Dimension");
  vk->add_option("--L", vk_L, "Box side");
  vk->add_option("--index", vk_index, "Lambda values (Gaussian: 1/sqrt(h))")->delimiter(',');
  vk->add_option("--eta", vk_etas, "Tail radii (default L/8, L/4)")->delimiter(',');
  vk->add_option("--quadrature", vk_q, "Lattice points per dimension (0 = automatic)");
  vk->add_flag("--check", vk_check, "Exit 3 unless every positive kernel passes");

  Overrides energy_o, corr_o, dens_o, scal_o;
  auto* le = app.add_subcommand("learn-energy", "Ground-state energy per qubit, m = 1");
  add_experiment_flags(le, energy_o, false);
  auto* lc = app.add_subcommand("learn-correlation", "Long-range order, m = 1 or 2");
  add_experiment_flags(lc, corr_o, false);
  auto* ld = app.add_subcommand("learn-density", "Ground-state density matrices");
  add_experiment_flags(ld, dens_o, false);
  auto* sc = app.add_subcommand("scaling", "Scaling sweep for any task");
  add_experiment_flags(sc, scal_o, true);

  auto* cx = app.add_subcommand("complexity", "Sample-complexity formulas and comparison ratios");
  pgk::ComplexityBudget budget = pgk::ComplexityBudget::comparison();
  double cx_log = 1.0;
  bool cx_check = false;
  cx->add_option("--epsilon", budget.epsilon, "Target error");
  cx->add_option("--delta", budget.delta, "Failure probability");
  cx->add_option("--m", budget.m, "Dimension");
  cx->add_option("--L", budget.L, "Box side");
  cx->add_option("--B", budget.B, "Twice the sup of |f|");
  cx->add_option("--C-L", budget.C_L, "Lipschitz constant");
  cx->add_option("--M", budget.M, "Number of local terms");
  cx->add_option("--k", budget.k, "Continuity exponent");
  auto* cx_log_opt = cx->add_option("--log-factor", cx_log, "Override log(2/delta); <= 0 uses delta");
  cx->add_flag("--check", cx_check, "Exit 3 unless log10 ratios are -48 +- 2 and -61 +- 2");

  auto* rb = app.add_subcommand("rkhs-bound", "Empirical/expected errors and RKHS bounds");
  int rb_lambda = 50, rb_n = 5, rb_test = 10000;
  std::size_t rb_N = 10000;
  double rb_delta = 0.05, rb_gamma = 1.0 / 3.0;
  std::uint64_t rb_seed = 20240601;
  bool rb_check = false;
  rb->add_option("--lambda", rb_lambda, "Fejer index");
  rb->add_option("--n", rb_n, "Qubits");
  rb->add_option("--gamma", rb_gamma, "Anisotropy");
  rb->add_option("--N", rb_N, "Training samples");
  rb->add_option("--delta", rb_delta, "Failure probability");
  rb->add_option("--test-size", rb_test, "Fresh points for the expected-error estimate");
  rb->add_option("--seed", rb_seed, "Seed");
  rb->add_flag("--check", rb_check, "Exit 3 when the estimate exceeds the radius bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*vk) {
      const pgk::ParamSpace space(vk_m, vk_L);
      bool all_ok = true;
      std::printf("%-10s %10s %14s %14s %14s %10s %8s\n", "kernel", "index", "min", "sup",
                  "norm", "tail_exp", "passed");
      for (double idx : vk_index) {
        pgk::KernelSpec spec = pgk::KernelSpec::fejer(space, 1);
        if (vk_kernel == "fejer") {
          spec = pgk::KernelSpec::fejer(space, static_cast<int>(idx));
        } else if (vk_kernel == "dirichlet") {
          spec = pgk::KernelSpec::dirichlet(space, static_cast<int>(idx));
        } else if (vk_kernel == "gaussian") {
          spec = pgk::KernelSpec::gaussian(space, 1.0 / (idx * idx));
        } else {
          throw pgk::ConfigError("unknown kernel '" + vk_kernel + "'");
        }
        int q = vk_q;
        if (q <= 0) q = vk_m == 1 ? 16384 : (vk_m == 2 ? 2048 : 256);
        const std::vector<double> etas =
            vk_etas.empty() ? std::vector<double>{vk_L / 8, vk_L / 4} : vk_etas;
        const pgk::PgkReport rep = pgk::verify_pgk(spec, etas, q);
        std::printf("%-10s %10g %14.6g %14.6g %14.10f %10.4f %8s\n", vk_kernel.c_str(), idx,
                    rep.min_value, rep.sup_value, rep.normalization, rep.fitted_tail_exponent,
                    rep.passed ? "yes" : "no");
        if (spec.is_positive()) all_ok = all_ok && rep.passed;
      }
      if (vk_kernel == "dirichlet") {
        for (double idx : vk_index) {
          std::printf("dirichlet L1 norm lambda=%g: %.6f\n", idx,
                      pgk::dirichlet_l1_norm(static_cast<int>(idx), space, 1 << 16));
        }
      }
      return (vk_check && !all_ok) ? kExitCheck : 0;
    }
    if (*le) return run_learn(le, energy_o, pgk::Task::Energy);
    if (*lc) return run_learn(lc, corr_o, pgk::Task::Correlation);
    if (*ld) return run_learn(ld, dens_o, pgk::Task::Density);
    if (*sc) {
      pgk::Task t = pgk::Task::Energy;
      if (sc->count("--config") && !sc->count("--task")) {
        t = pgk::ExperimentConfig::from_json(read_file(scal_o.config)).task;
      }
      return run_learn(sc, scal_o, t);
    }
    if (*cx) {
      if (cx_log_opt->count()) {
        budget.log_factor = cx_log > 0.0 ? std::optional<double>(cx_log) : std::nullopt;
      }
      budget.validate();
      const double eta = budget.eta();
      const double c = pgk::c_const(budget.m, budget.L, eta);
      const pgk::BigReal nf = pgk::n_fejer(budget);
      const pgk::BigReal nfm = pgk::n_fejer_multi(budget);
      const pgk::BigReal np = pgk::n_prior(budget);
      const double fr = nf.log10 - np.log10;
      std::printf("%-28s %s\n", "quantity", "value");
      std::printf("%-28s %.6g\n", "eta", eta);
      std::printf("%-28s %.6g\n", "C = 4mL^2/(pi^2 eta^2)", c);
      std::printf("%-28s %lld\n", "lambda_min", pgk::lambda_min(budget.B, c, budget.m, budget.epsilon));
      std::printf("%-28s 10^%.4f\n", "N fejer", nf.log10);
      std::printf("%-28s 10^%.4f\n", "N fejer (M functions)", nfm.log10);
      std::printf("%-28s 10^%.4f\n", "N_0 prior", np.log10);
      std::printf("%-28s 10^%.4f\n", "N fejer / N_0", fr);
      bool ok = std::abs(fr + 48.0) <= 2.0;
      if (budget.m >= 2) {
        const pgk::BigReal ng = pgk::n_gaussian(budget);
        std::printf("%-28s %.6g\n", "C_g", pgk::c_gaussian(budget));
        std::printf("%-28s 10^%.4f\n", "N gaussian", ng.log10);
        std::printf("%-28s 10^%.4f\n", "N gaussian / N_0", ng.log10 - np.log10);
        ok = ok && std::abs(ng.log10 - np.log10 + 61.0) <= 2.0;
      } else {
        ok = false;
      }
      if (cx_check) {
        std::printf("check: log10 ratios within 2 of -48 and -61: %s\n", ok ? "pass" : "FAIL");
        if (!ok) return kExitCheck;
      }
      return 0;
    }
    if (*rb) {
      pgk::ExperimentConfig c = pgk::ExperimentConfig::defaults(pgk::Task::Energy);
      c.lambda = rb_lambda;
      c.model.n = rb_n;
      c.model.gamma = rb_gamma;
      c.sweep = {rb_N};
      c.validate();
      if (rb_test < 1) throw pgk::ConfigError("--test-size must be >= 1");
      const pgk::KernelSpec spec = c.make_kernel();
      const pgk::TrainingSet set = pgk::make_training_set(c, rb_N, rb_seed);
      const std::vector<double> alphas = pgk::default_alphas(set);
      const auto predictor = [&](const pgk::ParamPoint& x) {
        return pgk::representer_predict(x, set, spec, alphas);
      };
      const auto truth = [&](const pgk::ParamPoint& x) { return pgk::energy_label(c, x); };
      const std::vector<pgk::ParamPoint> test =
          pgk::sample(spec.space(), static_cast<std::size_t>(rb_test), pgk::derive_seed(rb_seed, 1));
      double bmax = 0.0;
      for (const auto& x : pgk::grid(spec.space(), 1000)) bmax = std::max(bmax, std::abs(truth(x)));
      const pgk::RkhsBoundInputs in = pgk::RkhsBoundInputs::for_kernel(spec, 2.0 * bmax, rb_N, rb_delta);
      const double et = pgk::empirical_error(set, predictor);
      const double ep = pgk::expected_error_estimate(test, predictor, truth);
      const double main = pgk::generalization_bound(in, et, pgk::BoundVariant::Radius);
      const double appx = pgk::generalization_bound(in, et, pgk::BoundVariant::Trace);
      std::printf("B = %.6g, R = %.6g, lambda_f = %.6g, beta = %.6g\n", 2.0 * bmax, in.R, in.lambda_f, in.beta);
      std::printf("empirical error E_t       %.6g\n", et);
      std::printf("expected error estimate   %.6g (T = %d)\n", ep, rb_test);
      std::printf("bound (radius)            %.6g\n", main);
      std::printf("bound (trace)             %.6g\n", appx);
      if (rb_check && !(ep <= main)) {
        std::printf("check: FAIL\n");
        return kExitCheck;
      }
      return 0;
    }
  } catch (const pgk::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
