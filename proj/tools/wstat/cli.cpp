#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wstat/wstat.hpp"

namespace wstat::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "wstat 0.1.0";
constexpr unsigned kWarnNonPositiveScaleBit = 1u;

struct DensityArgs {
  std::string family = "gaussian";
  std::string pdf;

  StandardDensity resolve() const {
    if (!pdf.empty()) {
      if (family != "gaussian" && family != "custom") {
        throw InvalidArgumentError("--pdf can only be combined with --family custom");
      }
      return io::load_tabulated_density(pdf);
    }
    if (family == "custom") throw InvalidArgumentError("--family custom needs --pdf");
    return make_standard(family);
  }
};

void add_density_flags(CLI::App* cmd, DensityArgs& args) {
  cmd->add_option("--family", args.family, "gaussian | uniform | laplace | custom")
      ->capture_default_str();
  cmd->add_option("--pdf", args.pdf, "two-column CSV (z, f(z)) for a custom density");
}

struct SolverArgs {
  std::string solver = "closed";
  SolverOptions options;
};

void add_solver_flags(CLI::App* cmd, SolverArgs& args) {
  cmd->add_option("--solver", args.solver, "closed | simplex | equation | both")
      ->check(CLI::IsMember({"closed", "simplex", "equation", "both"}))
      ->capture_default_str();
  cmd->add_option("--max-iterations", args.options.max_iterations)->capture_default_str();
  cmd->add_option("--tolerance", args.options.simplex_tolerance, "relative simplex diameter")
      ->capture_default_str();
  cmd->add_option("--residual-tolerance", args.options.residual_tolerance)->capture_default_str();
  cmd->add_option("--simplex-scale", args.options.initial_simplex_scale)->capture_default_str();
  cmd->add_option("--multi-start", args.options.multi_start)->capture_default_str();
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::vector<std::pair<double, double>> parse_grid(const std::string& text) {
  std::vector<std::pair<double, double>> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw InvalidArgumentError("grid points are written mu:sigma, separated by ';'");
    }
    try {
      grid.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw InvalidArgumentError("grid point '" + item + "' is not numeric");
    }
  }
  if (grid.empty()) throw InvalidArgumentError("grid is empty");
  return grid;
}

std::vector<std::pair<double, double>> default_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double mu : {-3.0, 0.0, 5.0}) {
    for (double sigma : {0.1, 1.0, 10.0}) grid.emplace_back(mu, sigma);
  }
  return grid;
}

struct SimArgs {
  DensityArgs density;
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t n = 100;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> estimators{"w", "mle"};
  std::size_t threads = 1;
  std::string plot_data;

  SimConfig config() const {
    SimConfig c;
    c.density = density.resolve();
    c.true_mu = mu;
    c.true_sigma = sigma;
    c.n = n;
    c.trials = trials;
    c.master_seed = seed;
    c.threads = threads;
    c.estimators.clear();
    for (const auto& e : estimators) c.estimators.push_back(parse_estimator(e));
    c.validate();
    return c;
  }
};

void add_sim_flags(CLI::App* cmd, SimArgs& args) {
  add_density_flags(cmd, args.density);
  cmd->add_option("--mu", args.mu, "true location")->capture_default_str();
  cmd->add_option("--sigma", args.sigma, "true scale")->capture_default_str();
  cmd->add_option("--trials", args.trials)->capture_default_str();
  cmd->add_option("--seed", args.seed, "master seed")->envname("WSTAT_SEED")->capture_default_str();
  cmd->add_option("--estimators", args.estimators, "subset of {w, mle}")
      ->delimiter(',')
      ->check(CLI::IsMember({"w", "mle"}))
      ->capture_default_str();
  cmd->add_option("--threads", args.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  cmd->add_option("--plot-data", args.plot_data, "write n,estimator,parameter,statistic,value CSV");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  return f;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wasserstein statistics in one dimension: W-estimation, transport costs, "
               "metric tensors and Monte Carlo checks.",
               "wstat"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key = value file; flags override it");
  app.require_subcommand(1, 1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "fit a location-scale model to CSV data");
  std::string data_path;
  std::string column;
  DensityArgs est_density;
  std::string method = "w";
  SolverArgs solver;
  estimate->add_option("--data", data_path, "CSV file")->required();
  estimate->add_option("--column", column, "column name or zero-based index");
  add_density_flags(estimate, est_density);
  estimate->add_option("--method", method, "w | mle | both")
      ->check(CLI::IsMember({"w", "mle", "both"}))
      ->capture_default_str();
  add_solver_flags(estimate, solver);

  // cost
  auto* cost = app.add_subcommand("cost", "transport cost from the data to a model");
  std::string cost_data, cost_column;
  DensityArgs cost_density;
  double cost_mu = 0.0, cost_sigma = 1.0;
  cost->add_option("--data", cost_data, "CSV file")->required();
  cost->add_option("--column", cost_column, "column name or zero-based index");
  add_density_flags(cost, cost_density);
  cost->add_option("--mu", cost_mu)->required();
  cost->add_option("--sigma", cost_sigma)->required();

  // distance
  auto* distance = app.add_subcommand("distance", "squared W2 between two samples or two models");
  std::string dist_data1, dist_data2, dist_column;
  DensityArgs dist_density;
  std::string dist_family2;
  std::optional<double> mu1, sigma1, mu2, sigma2;
  auto* opt_d1 = distance->add_option("--data", dist_data1, "first sample CSV");
  auto* opt_d2 = distance->add_option("--data2", dist_data2, "second sample CSV");
  distance->add_option("--column", dist_column, "column name or index for both files");
  add_density_flags(distance, dist_density);
  distance->add_option("--family2", dist_family2, "family of the second model (default: --family)");
  auto* opt_mu1 = distance->add_option("--mu1", mu1);
  auto* opt_s1 = distance->add_option("--sigma1", sigma1);
  auto* opt_mu2 = distance->add_option("--mu2", mu2);
  auto* opt_s2 = distance->add_option("--sigma2", sigma2);
  opt_d1->needs(opt_d2);
  opt_d2->needs(opt_d1);
  for (auto* o : {opt_mu1, opt_s1, opt_mu2, opt_s2}) o->excludes(opt_d1)->excludes(opt_d2);

  // metric
  auto* metric = app.add_subcommand("metric", "Wasserstein metric tensor over a (mu, sigma) grid");
  DensityArgs metric_density;
  std::string grid_text;
  std::string psi = "analytic";
  add_density_flags(metric, metric_density);
  metric->add_option("--grid", grid_text, "points mu:sigma separated by ';' (default 3x3)");
  metric->add_option("--psi", psi, "analytic | fd")
      ->check(CLI::IsMember({"analytic", "fd"}))
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sampling distribution of the estimators");
  SimArgs sim;
  add_sim_flags(simulate, sim);
  simulate->add_option("--n", sim.n, "sample size")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "simulate over several sample sizes and fit rates");
  SimArgs swp;
  std::vector<std::size_t> n_values{100, 400, 1600, 6400};
  add_sim_flags(sweep, swp);
  sweep->add_option("--n-values", n_values, "ascending sample sizes")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) {
      const StandardDensity density = est_density.resolve();
      const OrderedSample sample = io::read_sample_csv(data_path, io::ColumnSelector::parse(column));
      json estimates = json::object();
      unsigned flags = 0;
      if (method == "w" || method == "both") {
        FitResult fit;
        if (solver.solver == "closed") {
          fit = fit_w_location_scale(sample, density);
        } else {
          SolverOptions opts = solver.options;
          opts.solver = solver.solver == "simplex"    ? SolverKind::simplex
                        : solver.solver == "equation" ? SolverKind::estimating_equation
                                                      : SolverKind::both;
          const auto closed = fit_w_location_scale(sample, density);
          const double start_sigma = closed.sigma() > 0.0 ? closed.sigma() : 1.0;
          fit = fit_w_general(sample, LocationScaleFamily(density), {closed.mu(), start_sigma}, opts);
        }
        if (fit.has_warning(kWarnNonPositiveScale)) flags |= kWarnNonPositiveScaleBit;
        estimates["w"] = to_json(fit);
      }
      if (method == "mle" || method == "both") {
        estimates["mle"] = to_json(fit_mle_location_scale(sample, density));
      }
      emit(out, {{"command", "estimate"},
                 {"family", density.name()},
                 {"n", sample.size()},
                 {"estimates", std::move(estimates)},
                 {"warning_flags", flags}});
      return kExitOk;
    }

    if (cost->parsed()) {
      const StandardDensity density = cost_density.resolve();
      const OrderedSample sample = io::read_sample_csv(cost_data, io::ColumnSelector::parse(cost_column));
      const LocationScaleModel model{density, cost_mu, cost_sigma};
      model.validate();
      emit(out, {{"command", "cost"},
                 {"family", density.name()},
                 {"n", sample.size()},
                 {"mu", cost_mu},
                 {"sigma", cost_sigma},
                 {"cost", cost_empirical_to_model(sample, model)},
                 {"cost_interval_sum", cost_interval_sum(sample, model)}});
      return kExitOk;
    }

    if (distance->parsed()) {
      if (!dist_data1.empty()) {
        const auto sel = io::ColumnSelector::parse(dist_column);
        const OrderedSample a = io::read_sample_csv(dist_data1, sel);
        const OrderedSample b = io::read_sample_csv(dist_data2, sel);
        emit(out, {{"command", "distance"},
                   {"mode", "samples"},
                   {"n", a.size()},
                   {"w2_squared", w2_squared_samples(a, b)}});
        return kExitOk;
      }
      if (!mu1 || !sigma1 || !mu2 || !sigma2) {
        throw InvalidArgumentError("distance needs --data/--data2 or all of --mu1 --sigma1 --mu2 --sigma2");
      }
      const StandardDensity first = dist_density.resolve();
      DensityArgs second_args = dist_density;
      if (!dist_family2.empty()) {
        second_args.family = dist_family2;
        if (dist_family2 != "custom") second_args.pdf.clear();
      }
      const StandardDensity second = second_args.resolve();
      const LocationScaleModel m1{first, *mu1, *sigma1};
      const LocationScaleModel m2{second, *mu2, *sigma2};
      json j{{"command", "distance"},
             {"mode", "models"},
             {"family", first.name()},
             {"family2", second.name()},
             {"w2_squared", w2_squared_models(m1, m2)}};
      if (dist_family2.empty() || dist_family2 == dist_density.family) {
        const double dm = *mu1 - *mu2;
        const double ds = *sigma1 - *sigma2;
        j["closed_form"] = dm * dm + ds * ds;
      }
      emit(out, j);
      return kExitOk;
    }

    if (metric->parsed()) {
      const StandardDensity density = metric_density.resolve();
      const auto grid = grid_text.empty() ? default_grid() : parse_grid(grid_text);
      const auto report = verify_euclidean(
          density, grid, psi == "fd" ? PsiMethod::finite_difference : PsiMethod::analytic);
      json j = to_json(report);
      j["command"] = "metric";
      j["psi"] = psi;
      emit(out, j);
      return kExitOk;
    }

    if (simulate->parsed()) {
      const SimConfig config = sim.config();
      const SimReport report = run_simulation(config);
      if (!sim.plot_data.empty()) {
        auto f = open_output(sim.plot_data);
        write_csv(f, report);
      }
      json j = to_json(report);
      j["command"] = "simulate";
      emit(out, j);
      if (report.degraded) {
        err << "warning: more than half of the fits failed for some estimator\n";
        return kExitDegraded;
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      const SimConfig config = swp.config();
      const SweepReport report = convergence_sweep(config, n_values);
      if (!swp.plot_data.empty()) {
        auto f = open_output(swp.plot_data);
        write_csv(f, report);
      }
      json j = to_json(report);
      j["command"] = "sweep";
      emit(out, j);
      return report.degraded ? kExitDegraded : kExitOk;
    }
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegraded;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace wstat::cli
