#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wstat/densities.hpp"
#include "wstat/model.hpp"
#include "wstat/transport.hpp"

namespace wstat {

enum class FitMethod { w_closed_form, w_numeric, mle };

std::string_view to_string(FitMethod method) noexcept;

inline constexpr std::string_view kWarnNonPositiveScale = "nonpositive_sigma";
inline constexpr std::string_view kWarnResidualNoiseFloor = "estimating_equation_noise_floor";
inline constexpr std::string_view kWarnSolverFallback = "estimating_equation_failed";

struct LocalMinimum {
  std::vector<double> theta;
  double cost = 0.0;
};

struct FitResult {
  std::vector<double> theta_hat;
  /// Transport cost C(theta_hat) from the empirical distribution.
  double cost = 0.0;
  FitMethod method = FitMethod::w_closed_form;
  std::vector<std::string> warnings;
  std::size_t iterations = 0;
  /// Mean log-likelihood at theta_hat; set by the MLE fits only.
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
  /// Distinct minima found by multi-start, cheapest first.
  std::vector<LocalMinimum> local_minima;

  double mu() const { return theta_hat.at(0); }
  double sigma() const { return theta_hat.at(1); }
  bool has_warning(std::string_view tag) const;
};

/// Closed-form W-estimator: mu = mean(x), sigma = sum k_i x_i.
/// A non-positive sigma is returned unchanged with a warning.
FitResult fit_w_location_scale(const OrderedSample& sample, const StandardDensity& density);

/// As above with a partition of the density precomputed for n = sample.size().
FitResult fit_w_location_scale(const OrderedSample& sample, const Partition& cells);

enum class SolverKind { simplex, estimating_equation, both };

struct SolverOptions {
  SolverKind solver = SolverKind::simplex;
  std::size_t max_iterations = 10000;
  double simplex_tolerance = 1e-8;
  double residual_tolerance = 1e-8;
  double initial_simplex_scale = 0.1;
  /// Central-difference step for dk_i/dtheta and dS/dtheta, relative to
  /// max(1, |theta_j|).
  double fd_step = 1e-5;
  /// Extra simplex runs from perturbed starts; all distinct minima are kept.
  std::size_t multi_start = 0;
  std::uint64_t seed = 0;
};

/// Minimizes C(theta) for a general model. Infeasible points cost +inf.
/// Throws NonConvergenceError (carrying the best point) when no requested
/// solver converges within max_iterations.
FitResult fit_w_general(const OrderedSample& sample, const ParametricModel& model,
                        std::vector<double> theta0, const SolverOptions& options = {});

/// Residual of the estimating equation,
///   sum_i dk_i/dtheta x_i - (1/2) dS/dtheta,
/// by central differences. Zero at a stationary point of C.
std::vector<double> estimating_equation_residual(const OrderedSample& sample,
                                                 const ParametricModel& model,
                                                 std::span<const double> theta,
                                                 double fd_step = 1e-5);

/// Maximum-likelihood baseline. Closed form for gaussian and uniform,
/// Nelder-Mead over (mu, log sigma) otherwise. Throws DegenerateSampleError
/// for n < 2 or a constant sample.
FitResult fit_mle_location_scale(const OrderedSample& sample, const StandardDensity& density);

}  // namespace wstat
