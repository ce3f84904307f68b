#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace wstat {

enum class Family { gaussian, uniform, laplace, custom };

std::string_view to_string(Family family) noexcept;

/// Parses a builtin family name. Throws UnknownFamilyError otherwise;
/// "custom" is not accepted here because it needs a pdf.
Family parse_builtin_family(std::string_view name);

/// Closed interval [lower, upper]; either end may be infinite.
struct Support {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool bounded_below() const noexcept { return std::isfinite(lower); }
  bool bounded_above() const noexcept { return std::isfinite(upper); }
  bool contains(double z) const noexcept { return z >= lower && z <= upper; }
};

namespace detail {

class DensityModel {
 public:
  virtual ~DensityModel() = default;
  virtual Family family() const noexcept = 0;
  virtual std::string name() const = 0;
  virtual Support support() const noexcept = 0;
  virtual double pdf(double z) const = 0;
  virtual double cdf(double z) const = 0;
  virtual double quantile(double u) const = 0;
  virtual double partial_first_moment(double a, double b) const = 0;
  virtual double partial_second_moment(double a, double b) const = 0;
  virtual double fourth_moment() const = 0;
  virtual bool analytic() const noexcept = 0;
};

}  // namespace detail

/// A density with mean 0 and variance 1.
///
/// Value type over an immutable shared implementation: copies are cheap and
/// instances may be shared freely between threads.
class StandardDensity {
 public:
  explicit StandardDensity(std::shared_ptr<const detail::DensityModel> model);

  Family family() const noexcept { return model_->family(); }
  std::string name() const { return model_->name(); }
  Support support() const noexcept { return model_->support(); }

  double pdf(double z) const { return model_->pdf(z); }
  double cdf(double z) const { return model_->cdf(z); }

  /// F^{-1}(u) for 0 < u < 1; throws InvalidProbabilityError otherwise.
  double quantile(double u) const;

  /// Integral of z f(z) over [a, b]; bounds may be infinite and are clipped
  /// to the support.
  double partial_first_moment(double a, double b) const {
    return model_->partial_first_moment(a, b);
  }
  /// Integral of z^2 f(z) over [a, b].
  double partial_second_moment(double a, double b) const {
    return model_->partial_second_moment(a, b);
  }
  double fourth_moment() const { return model_->fourth_moment(); }

  /// True when pdf/cdf/quantile/partial moments are closed-form.
  bool has_analytic_moments() const noexcept { return model_->analytic(); }

 private:
  std::shared_ptr<const detail::DensityModel> model_;
};

StandardDensity make_standard(Family family);
StandardDensity make_standard(std::string_view family);

struct CustomOptions {
  /// Tail mass below which an unbounded support is cut for tabulation.
  double tail_mass = 1e-13;
  /// Number of equal-width cells in the cumulative tables.
  std::size_t table_cells = 512;
  std::string name = "custom";
};

/// Standardizes an arbitrary nonnegative pdf on `support` (mean 0, variance 1).
///
/// The input need not be normalized. Throws NonIntegrableError when the mass
/// or second moment cannot be integrated, DegenerateDensityError when the
/// variance vanishes, InvalidArgumentError for negative or non-finite pdf
/// values.
StandardDensity make_custom(std::function<double(double)> pdf, Support support,
                            const CustomOptions& options = {});

/// Piecewise-linear pdf through the points (z[i], f[i]), zero outside
/// [z.front(), z.back()], then standardized like make_custom.
StandardDensity make_tabulated(std::span<const double> z, std::span<const double> f,
                               const CustomOptions& options = {});

struct QuantileOptions {
  double probability_tol = 1e-12;
  /// Largest |z| the bracket may expand to on an unbounded side.
  double max_bracket = 1e6;
  std::size_t max_iterations = 400;
};

/// Inverts the cdf by bracketed bisection (Newton-accelerated while the
/// step stays inside the bracket). Returns z with |cdf(z) - u| <= tol.
double quantile_numeric(const StandardDensity& density, double u,
                        const QuantileOptions& options = {});

/// Integral of z^4 f(z) over the support by adaptive quadrature.
double fourth_moment_quadrature(const StandardDensity& density);

}  // namespace wstat
