#include "wstat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wstat/errors.hpp"
#include "wstat/estimation.hpp"
#include "wstat/quadrature.hpp"

namespace wstat {

namespace {

constexpr double kGuideLevels[] = {1e-3, 0.1, 0.5, 0.9, 1.0 - 1e-3};

quadrature::Options metric_options() {
  quadrature::Options o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-12;
  o.max_intervals = 5000;
  return o;
}

// Integrates f over [lo, hi] split at the given interior breakpoints.
template <class F>
quadrature::Result integrate_split(F&& f, double lo, double hi, std::span<const double> breaks) {
  quadrature::Result total;
  total.converged = true;
  double left = lo;
  auto piece = [&](double right) {
    if (!(right > left)) return;
    const auto r = quadrature::integrate(f, left, right, metric_options());
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
    left = right;
  };
  for (double b : breaks) {
    if (b > lo && b < hi) piece(b);
  }
  piece(hi);
  return total;
}

}  // namespace

double MetricTensor::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double MetricTensor::deviation_from_identity() const {
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

MetricTensor metric_tensor(const ParametricModel& model, std::span<const double> theta,
                           const MetricOptions& options) {
  if (!model.feasible(theta)) throw InvalidArgumentError("parameter outside the model domain");
  const std::size_t d = model.dimension();
  const Support support = model.support(theta);
  const double lower_level = support.bounded_below() ? options.endpoint_margin : options.tail_level;
  const double upper_level = support.bounded_above() ? options.endpoint_margin : options.tail_level;
  const double lo = model.quantile(lower_level, theta);
  const double hi = model.quantile(1.0 - upper_level, theta);

  std::vector<double> breaks;
  for (double u : kGuideLevels) {
    if (u > lower_level && u < 1.0 - upper_level) breaks.push_back(model.quantile(u, theta));
  }
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> steps(d);
  for (std::size_t j = 0; j < d; ++j) steps[j] = options.fd_step * std::max(1.0, std::abs(theta[j]));

  std::vector<double> probe(theta.begin(), theta.end());
  auto psi = [&](std::size_t j, double x) {
    probe[j] = theta[j] + steps[j];
    const double plus = model.cdf(x, probe);
    probe[j] = theta[j] - steps[j];
    const double minus = model.cdf(x, probe);
    probe[j] = theta[j];
    return (plus - minus) / (2.0 * steps[j]);
  };

  MetricTensor out;
  out.g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  out.theta.assign(theta.begin(), theta.end());
  out.excluded_mass = lower_level + upper_level;
  double error = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      auto integrand = [&](double x) {
        const double p = model.pdf(x, theta);
        if (!(p > 0.0)) {
          std::ostringstream msg;
          msg << "density vanishes at x = " << x << " inside the support";
          throw SingularDensityError(msg.str());
        }
        return psi(i, x) * psi(j, x) / p;
      };
      const auto r = integrate_split(integrand, lo, hi, breaks);
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      out.g(ii, jj) = r.value;
      out.g(jj, ii) = r.value;
      error += r.abs_error;
    }
  }
  out.quadrature_error_estimate = error + out.excluded_mass;
  return out;
}

MetricTensor metric_tensor(const LocationScaleModel& model, PsiMethod method,
                           const MetricOptions& options) {
  model.validate();
  if (method == PsiMethod::finite_difference) {
    const LocationScaleFamily family(model.base);
    const double theta[] = {model.mu, model.sigma};
    return metric_tensor(family, theta, options);
  }

  const Support support = model.support();
  const double lower_level = support.bounded_below() ? 0.0 : options.tail_level;
  const double upper_level = support.bounded_above() ? 0.0 : options.tail_level;
  const double lo = support.bounded_below() ? support.lower : model.quantile(lower_level);
  const double hi = support.bounded_above() ? support.upper : model.quantile(1.0 - upper_level);
  std::vector<double> breaks;
  for (double u : kGuideLevels) breaks.push_back(model.quantile(u));

  // psi_i psi_j / p for psi_mu = -p, psi_sigma = -(x - mu) p / sigma.
  auto zp = [&](int power) {
    return [&model, power](double x) {
      const double z = (x - model.mu) / model.sigma;
      const double p = model.pdf(x);
      return power == 0 ? p : (power == 1 ? z * p : z * z * p);
    };
  };
  const auto g_mm = integrate_split(zp(0), lo, hi, breaks);
  const auto g_ms = integrate_split(zp(1), lo, hi, breaks);
  const auto g_ss = integrate_split(zp(2), lo, hi, breaks);

  MetricTensor out;
  out.g.resize(2, 2);
  out.g << g_mm.value, g_ms.value, g_ms.value, g_ss.value;
  out.theta = {model.mu, model.sigma};
  out.excluded_mass = lower_level + upper_level;
  out.quadrature_error_estimate =
      g_mm.abs_error + 2.0 * g_ms.abs_error + g_ss.abs_error + out.excluded_mass;
  return out;
}

EuclideanReport verify_euclidean(const StandardDensity& density,
                                 std::span<const std::pair<double, double>> grid,
                                 PsiMethod method) {
  for (const auto& [mu, sigma] : grid) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
      throw InvalidArgumentError("grid points need finite mu and sigma > 0");
    }
  }
  EuclideanReport report;
  report.family = density.name();
  static constexpr double kSteps[] = {1e-2, 1e-3};
  for (const auto& [mu, sigma] : grid) {
    const LocationScaleModel model{density, mu, sigma};
    GridPointReport point{mu, sigma, metric_tensor(model, method), 0.0};
    point.deviation = point.tensor.deviation_from_identity();
    report.max_deviation = std::max(report.max_deviation, point.deviation);
    report.points.push_back(std::move(point));

    for (double h : kSteps) {
      for (int axis = 0; axis < 2; ++axis) {
        ExpansionCheck check{mu, sigma, axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, 0.0};
        const LocationScaleModel moved{density, mu + check.d_mu, sigma + check.d_sigma};
        check.ratio = w2_squared_models(model, moved) / (h * h);
        report.max_ratio_deviation = std::max(report.max_ratio_deviation, std::abs(check.ratio - 1.0));
        report.expansions.push_back(check);
      }
    }
  }
  return report;
}

double pythagoras_residual(const OrderedSample& sample, const StandardDensity& density,
                           std::span<const double> theta_prime) {
  if (theta_prime.size() != 2) throw InvalidArgumentError("theta' must be (mu, sigma)");
  const LocationScaleModel other{density, theta_prime[0], theta_prime[1]};
  other.validate();
  const Partition cells = partition(density, sample.size());
  const FitResult fit = fit_w_location_scale(sample, cells);
  const double c_other = cost_empirical_to_model(sample, other, cells);
  const double dmu = theta_prime[0] - fit.mu();
  const double dsigma = theta_prime[1] - fit.sigma();
  return c_other - fit.cost - (dmu * dmu + dsigma * dsigma);
}

}  // namespace wstat
