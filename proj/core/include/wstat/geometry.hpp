#pragma once

// Wasserstein Riemannian structure of parametric families on the line.
//
// For an infinitesimal change dp the transport cost is the quadratic form
//   C(p, p + dp) = integral of (1/p(x)) (integral_{-inf}^{x} dp)^2 dx,
// so with psi_i(x) = dP(x; theta)/dtheta_i the metric tensor is
//   g_ij = integral of psi_i(x) psi_j(x) / p(x) dx.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wstat/densities.hpp"
#include "wstat/model.hpp"
#include "wstat/transport.hpp"

namespace wstat {

struct MetricTensor {
  Eigen::MatrixXd g;
  std::vector<double> theta;
  /// Sum of quadrature error estimates plus the truncated-mass bound.
  double quadrature_error_estimate = 0.0;
  /// Probability mass outside the integration range.
  double excluded_mass = 0.0;

  double min_eigenvalue() const;
  /// max_ij |g_ij - delta_ij|.
  double deviation_from_identity() const;
};

enum class PsiMethod { analytic, finite_difference };

struct MetricOptions {
  /// Quantile level at which unbounded sides are truncated.
  double tail_level = 1e-10;
  /// Probability margin removed at bounded support ends (general models).
  double endpoint_margin = 1e-8;
  /// Central-difference step of the cdf in theta, relative to max(1, |theta_j|).
  double fd_step = 1e-8;
};

/// Metric tensor of a general model with psi from central differences of
/// the cdf. Throws SingularDensityError if p vanishes inside the range.
MetricTensor metric_tensor(const ParametricModel& model, std::span<const double> theta,
                           const MetricOptions& options = {});

/// Metric tensor of a location-scale model at (mu, sigma). The analytic
/// route uses psi_mu = -p and psi_sigma = -(x - mu) p / sigma.
MetricTensor metric_tensor(const LocationScaleModel& model,
                           PsiMethod method = PsiMethod::analytic,
                           const MetricOptions& options = {});

struct GridPointReport {
  double mu = 0.0;
  double sigma = 0.0;
  MetricTensor tensor;
  double deviation = 0.0;
};

struct ExpansionCheck {
  double mu = 0.0;
  double sigma = 0.0;
  double d_mu = 0.0;
  double d_sigma = 0.0;
  /// w2_squared_models(theta, theta + dtheta) / |dtheta|^2.
  double ratio = 0.0;
};

struct EuclideanReport {
  std::string family;
  std::vector<GridPointReport> points;
  std::vector<ExpansionCheck> expansions;
  double max_deviation = 0.0;
  double max_ratio_deviation = 0.0;
};

/// Evaluates |G(theta) - I|_inf over the grid and the second-order
/// expansion ratio at |dtheta| in {1e-2, 1e-3} along each axis.
/// Throws InvalidArgumentError for a grid point with sigma <= 0.
EuclideanReport verify_euclidean(const StandardDensity& density,
                                 std::span<const std::pair<double, double>> grid,
                                 PsiMethod method = PsiMethod::analytic);

/// C(p_hat, p_theta') - C(p_hat, p_theta_hat) - |theta' - theta_hat|^2 with
/// theta_hat the closed-form W-estimate.
double pythagoras_residual(const OrderedSample& sample, const StandardDensity& density,
                           std::span<const double> theta_prime);

}  // namespace wstat
