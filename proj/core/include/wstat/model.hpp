#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wstat/densities.hpp"

namespace wstat {

/// p(x; mu, sigma) = f((x - mu) / sigma) / sigma for a standardized f.
struct LocationScaleModel {
  StandardDensity base;
  double mu = 0.0;
  double sigma = 1.0;

  /// Throws InvalidArgumentError unless sigma > 0 and both are finite.
  void validate() const;

  double pdf(double x) const { return base.pdf((x - mu) / sigma) / sigma; }
  double cdf(double x) const { return base.cdf((x - mu) / sigma); }
  double quantile(double u) const { return mu + sigma * base.quantile(u); }
  Support support() const {
    const Support s = base.support();
    return {mu + sigma * s.lower, mu + sigma * s.upper};
  }
  double mean() const { return mu; }
  double variance() const { return sigma * sigma; }
};

/// A parametric family p(x; theta) on the real line.
///
/// Only pdf and cdf are required. The quantile defaults to bracketed
/// inversion of the cdf; models with a closed form should override it.
class ParametricModel {
 public:
  virtual ~ParametricModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual double pdf(double x, std::span<const double> theta) const = 0;
  virtual double cdf(double x, std::span<const double> theta) const = 0;
  virtual Support support(std::span<const double> theta) const = 0;

  virtual double quantile(double u, std::span<const double> theta) const;
  virtual bool feasible(std::span<const double> theta) const;
  virtual std::vector<std::string> parameter_names() const;
};

/// The location-scale family over `base`, seen through the generic
/// interface with theta = (mu, sigma). Nothing here uses the closed-form
/// partial moments of the base, so cost and metric computed through this
/// adapter form an independent route from the location-scale specific ones.
class LocationScaleFamily final : public ParametricModel {
 public:
  explicit LocationScaleFamily(StandardDensity base) : base_(std::move(base)) {}

  std::size_t dimension() const override { return 2; }
  double pdf(double x, std::span<const double> theta) const override;
  double cdf(double x, std::span<const double> theta) const override;
  Support support(std::span<const double> theta) const override;
  double quantile(double u, std::span<const double> theta) const override;
  bool feasible(std::span<const double> theta) const override;
  std::vector<std::string> parameter_names() const override { return {"mu", "sigma"}; }

  const StandardDensity& base() const noexcept { return base_; }

 private:
  StandardDensity base_;
};

}  // namespace wstat
