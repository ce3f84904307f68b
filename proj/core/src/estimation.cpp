#include "wstat/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wstat/errors.hpp"
#include "wstat/optimize.hpp"

namespace wstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.7320508075688772935274463415059;

double general_cost_or_inf(const OrderedSample& sample, const ParametricModel& model,
                           std::span<const double> theta) {
  if (!model.feasible(theta)) return kInf;
  try {
    return cost_general(sample, model, theta);
  } catch (const Error&) {
    return kInf;
  }
}

void flag_scale(FitResult& fit) {
  if (fit.theta_hat.size() >= 2 && !(fit.theta_hat[1] > 0.0)) {
    fit.warnings.emplace_back(kWarnNonPositiveScale);
  }
}

double median_of(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double mean_log_likelihood(const OrderedSample& sample, const StandardDensity& density,
                           double mu, double sigma) {
  double acc = 0.0;
  for (double x : sample.values()) {
    const double f = density.pdf((x - mu) / sigma);
    if (!(f > 0.0)) return -kInf;
    acc += std::log(f);
  }
  return acc / static_cast<double>(sample.size()) - std::log(sigma);
}

bool same_point(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > tol * std::max(1.0, std::abs(a[j]))) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(FitMethod method) noexcept {
  switch (method) {
    case FitMethod::w_closed_form:
      return "w_closed_form";
    case FitMethod::w_numeric:
      return "w_numeric";
    case FitMethod::mle:
      return "mle";
  }
  return "unknown";
}

bool FitResult::has_warning(std::string_view tag) const {
  return std::find(warnings.begin(), warnings.end(), tag) != warnings.end();
}

FitResult fit_w_location_scale(const OrderedSample& sample, const StandardDensity& density) {
  return fit_w_location_scale(sample, partition(density, sample.size()));
}

FitResult fit_w_location_scale(const OrderedSample& sample, const Partition& cells) {
  if (cells.n != sample.size()) {
    throw SizeMismatchError("partition size does not match the sample size");
  }
  const auto x = sample.values();
  // The k_i sum to zero, so centering on any data point leaves the estimate
  // unchanged while removing cancellation; constant data gives exactly 0.
  const double pivot = x[x.size() / 2];
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) scale += cells.k[i] * (x[i] - pivot);

  FitResult fit;
  fit.method = FitMethod::w_closed_form;
  fit.theta_hat = {sample.mean(), scale};
  // The closed-form cost accepts any sign of sigma.
  fit.cost = cost_empirical_to_model(sample, LocationScaleModel{cells.density, fit.mu(), scale},
                                     cells);
  flag_scale(fit);
  return fit;
}

std::vector<double> estimating_equation_residual(const OrderedSample& sample,
                                                 const ParametricModel& model,
                                                 std::span<const double> theta, double fd_step) {
  const auto x = sample.values();
  auto linear_part = [&](std::span<const double> t) {
    const auto c = model_coefficients(model, t, sample.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += c.k[i] * x[i];
    return acc - 0.5 * c.second_moment;
  };
  std::vector<double> r(theta.size());
  std::vector<double> probe(theta.begin(), theta.end());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double h = fd_step * std::max(1.0, std::abs(theta[j]));
    probe[j] = theta[j] + h;
    const double plus = linear_part(probe);
    probe[j] = theta[j] - h;
    const double minus = linear_part(probe);
    probe[j] = theta[j];
    r[j] = (plus - minus) / (2.0 * h);
  }
  return r;
}

FitResult fit_w_general(const OrderedSample& sample, const ParametricModel& model,
                        std::vector<double> theta0, const SolverOptions& options) {
  if (theta0.size() != model.dimension()) {
    throw InvalidArgumentError("theta0 has the wrong dimension for the model");
  }
  if (!model.feasible(theta0)) throw InvalidArgumentError("theta0 is infeasible");

  const optimize::Objective objective = [&](std::span<const double> t) {
    return general_cost_or_inf(sample, model, t);
  };

  std::vector<LocalMinimum> minima;
  std::vector<std::string> warnings;
  std::size_t iterations = 0;
  bool any_converged = false;
  std::vector<double> best_seen = theta0;
  double best_seen_cost = kInf;
  auto record = [&](std::vector<double> theta, double cost, bool converged) {
    if (cost < best_seen_cost) {
      best_seen = theta;
      best_seen_cost = cost;
    }
    if (!converged || !std::isfinite(cost)) return;
    any_converged = true;
    for (const auto& m : minima) {
      if (same_point(m.theta, theta, 1e-6)) return;
    }
    minima.push_back({std::move(theta), cost});
  };

  optimize::SimplexOptions simplex;
  simplex.max_iterations = options.max_iterations;
  simplex.tolerance = options.simplex_tolerance;
  simplex.initial_scale = options.initial_simplex_scale;

  if (options.solver != SolverKind::estimating_equation) {
    auto res = optimize::nelder_mead(objective, theta0, simplex);
    iterations += res.iterations;
    record(res.x, res.value, res.converged);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> jitter(0.0, 1.0);
    for (std::size_t s = 0; s < options.multi_start; ++s) {
      std::vector<double> start = theta0;
      for (std::size_t attempt = 0; attempt < 100; ++attempt) {
        for (std::size_t j = 0; j < start.size(); ++j) {
          start[j] = theta0[j] + 0.5 * std::max(1.0, std::abs(theta0[j])) * jitter(rng);
        }
        if (model.feasible(start)) break;
        start = theta0;
      }
      auto r = optimize::nelder_mead(objective, start, simplex);
      iterations += r.iterations;
      record(r.x, r.value, r.converged);
    }
  }

  if (options.solver != SolverKind::simplex) {
    optimize::RootOptions root;
    root.max_iterations = std::min<std::size_t>(options.max_iterations, 500);
    root.residual_tolerance = options.residual_tolerance;
    root.jacobian_step = options.fd_step * 10.0;
    const optimize::Residual residual = [&](std::span<const double> t) {
      if (!model.feasible(t)) throw InvalidArgumentError("infeasible");
      return estimating_equation_residual(sample, model, t, options.fd_step);
    };
    // Start from the simplex solution when one exists: the root nearest the
    // cost minimum is the one the estimator is defined by.
    std::vector<double> start = minima.empty() ? theta0 : minima.front().theta;
    try {
      auto res = optimize::broyden(residual, start, root);
      iterations += res.iterations;
      const double cost = objective(res.x);
      if (res.stalled && std::isfinite(cost)) {
        warnings.emplace_back(kWarnResidualNoiseFloor);
      }
      record(res.x, cost, (res.converged || res.stalled) && std::isfinite(cost));
      if (!res.converged && !res.stalled && options.solver == SolverKind::both) {
        warnings.emplace_back(kWarnSolverFallback);
      }
    } catch (const Error&) {
      if (options.solver == SolverKind::estimating_equation) throw;
      warnings.emplace_back(kWarnSolverFallback);
    }
  }

  if (!any_converged) {
    throw NonConvergenceError("W-estimator search did not converge", best_seen, best_seen_cost);
  }
  std::sort(minima.begin(), minima.end(),
            [](const LocalMinimum& a, const LocalMinimum& b) { return a.cost < b.cost; });

  FitResult fit;
  fit.method = FitMethod::w_numeric;
  fit.theta_hat = minima.front().theta;
  fit.cost = minima.front().cost;
  fit.iterations = iterations;
  fit.warnings = std::move(warnings);
  fit.local_minima = std::move(minima);
  flag_scale(fit);
  return fit;
}

FitResult fit_mle_location_scale(const OrderedSample& sample, const StandardDensity& density) {
  const auto x = sample.values();
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateSampleError("maximum likelihood needs at least two observations");
  if (x.front() == x.back()) {
    throw DegenerateSampleError("all observations are equal; the likelihood is unbounded");
  }

  FitResult fit;
  fit.method = FitMethod::mle;
  switch (density.family()) {
    case Family::gaussian: {
      const double mu = sample.mean();
      double ss = 0.0;
      for (double v : x) ss += (v - mu) * (v - mu);
      fit.theta_hat = {mu, std::sqrt(ss / static_cast<double>(n))};
      break;
    }
    case Family::uniform:
      fit.theta_hat = {0.5 * (x.front() + x.back()), (x.back() - x.front()) / (2.0 * kSqrt3)};
      break;
    default: {
      const double mu0 = median_of(x);
      const double mean = sample.mean();
      double ss = 0.0;
      for (double v : x) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(n));
      const optimize::Objective nll = [&](std::span<const double> t) {
        return -mean_log_likelihood(sample, density, t[0], std::exp(t[1]));
      };
      optimize::SimplexOptions opt;
      opt.tolerance = 1e-10;
      opt.initial_scale = 0.05;
      auto res = optimize::nelder_mead(nll, {mu0, std::log(sd)}, opt);
      if (!res.converged || !std::isfinite(res.value)) {
        throw NonConvergenceError("likelihood maximization did not converge",
                                  {res.x[0], std::exp(res.x[1])}, res.value);
      }
      fit.theta_hat = {res.x[0], std::exp(res.x[1])};
      fit.iterations = res.iterations;
      break;
    }
  }
  fit.log_likelihood = mean_log_likelihood(sample, density, fit.mu(), fit.sigma());
  fit.cost = cost_empirical_to_model(sample, LocationScaleModel{density, fit.mu(), fit.sigma()});
  return fit;
}

}  // namespace wstat
