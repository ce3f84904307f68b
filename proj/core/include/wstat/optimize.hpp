#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wstat::optimize {

using Objective = std::function<double(std::span<const double>)>;
using Residual = std::function<std::vector<double>(std::span<const double>)>;

struct SimplexOptions {
  std::size_t max_iterations = 10000;
  /// Stop when max_i |v_i - v_best|_inf <= tolerance * max(1, |v_best|_inf).
  double tolerance = 1e-8;
  /// Initial edge length along coordinate j: scale * max(1, |x0_j|).
  double initial_scale = 0.1;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex. Non-finite objective values (and
/// exceptions thrown by the objective) are treated as +inf.
SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          const SimplexOptions& options = {});

struct RootOptions {
  std::size_t max_iterations = 200;
  double residual_tolerance = 1e-8;
  /// Relative step below which the iteration is considered stalled.
  double step_tolerance = 1e-12;
  /// Finite-difference step for the initial Jacobian, relative to max(1, |x_j|).
  double jacobian_step = 1e-5;
};

struct RootResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Converged on step size rather than residual.
  bool stalled = false;
};

/// Broyden's method with a finite-difference initial Jacobian and a
/// backtracking line search on |r|. Points where r throws or is
/// non-finite are rejected by the line search.
RootResult broyden(const Residual& r, std::vector<double> x0, const RootOptions& options = {});

}  // namespace wstat::optimize
