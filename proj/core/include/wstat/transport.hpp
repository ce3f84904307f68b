#pragma once

// One-dimensional optimal transport under squared distance cost.
//
// In 1D the optimal plan is the monotone coupling, so every cost here is an
// L2 distance between quantile functions. Against an n-point empirical
// distribution the model is cut into n cells of equal mass; cell i is
// matched to the i-th order statistic.

#include <cstddef>
#include <span>
#include <vector>

#include "wstat/densities.hpp"
#include "wstat/model.hpp"

namespace wstat {

/// n observations sorted ascending. Ties are kept.
class OrderedSample {
 public:
  /// Sorts `values`. Throws EmptySampleError when empty and
  /// InvalidArgumentError on non-finite entries.
  explicit OrderedSample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Right-continuous step quantile: the ceil(n u)-th order statistic.
  double empirical_quantile(double u) const;

  double mean() const;
  double mean_square() const;

 private:
  std::vector<double> values_;
};

/// Equi-probability partition of a standardized density into n cells.
struct Partition {
  /// Interior points z_1 .. z_{n-1} with F(z_i) = i/n.
  std::vector<double> z;
  /// k_i = integral of z f(z) over cell i, i = 1 .. n.
  std::vector<double> k;
  std::size_t n = 0;
  StandardDensity density;

  /// Cell boundary i in 0 .. n; the ends are the support endpoints.
  double boundary(std::size_t i) const;
};

Partition partition(const StandardDensity& density, std::size_t n);

/// Closed-form cost from the empirical distribution of `sample` to the
/// location-scale model:
///   mu^2 + sigma^2 + (1/n) sum x_i^2 - 2 sum x_i (sigma k_i + mu / n).
/// Throws InvalidArgumentError unless sigma > 0.
double cost_empirical_to_model(const OrderedSample& sample, const LocationScaleModel& model);

/// As above with a precomputed partition of model.base at n = sample.size().
/// The polynomial is evaluated for any sigma, including sigma <= 0.
double cost_empirical_to_model(const OrderedSample& sample, const LocationScaleModel& model,
                               const Partition& cells);

/// The same cost evaluated directly as sum_i of the integral of
/// (x_i - x)^2 p(x) over model cell i, by adaptive quadrature in x.
double cost_interval_sum(const OrderedSample& sample, const LocationScaleModel& model);

/// Cell moments of a general model at theta for an n-cell partition.
struct ModelCoefficients {
  /// Interior partition points in x, x_1 .. x_{n-1}.
  std::vector<double> x;
  /// k_i(theta) = integral of x p(x; theta) over cell i.
  std::vector<double> k;
  /// S(theta) = integral of x^2 p(x; theta).
  double second_moment = 0.0;
  double mass = 0.0;
};

/// Computes k_i(theta) and S(theta) by quadrature of the pdf.
/// Throws NonIntegrableError if the pdf does not integrate to one or the
/// second moment is not finite.
ModelCoefficients model_coefficients(const ParametricModel& model, std::span<const double> theta,
                                     std::size_t n);

/// C(theta) = (1/n) sum x_i^2 - 2 sum k_i(theta) x_i + S(theta).
double cost_general(const OrderedSample& sample, const ParametricModel& model,
                    std::span<const double> theta);

/// Squared 2-Wasserstein distance between two location-scale models by
/// quadrature of (P^{-1}(u) - Q^{-1}(u))^2 over (0, 1). Mixed base
/// families are allowed.
double w2_squared_models(const LocationScaleModel& first, const LocationScaleModel& second);

/// (1/n) sum (x_i - y_i)^2 over the sorted pairing. Sizes must match.
double w2_squared_samples(const OrderedSample& first, const OrderedSample& second);

}  // namespace wstat
