#pragma once

// Reference values computed independently of the library: closed-form
// densities written out from scratch and Boost.Math quadrature.

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kPi = boost::math::constants::pi<double>();
inline const double kSqrt3 = std::sqrt(3.0);

struct Density {
  std::function<double(double)> pdf;
  double lower;
  double upper;
};

inline Density gaussian() {
  return {[](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); },
          -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

inline Density uniform() {
  return {[](double z) { return std::abs(z) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0; }, -kSqrt3,
          kSqrt3};
}

inline Density laplace() {
  const double b = 1.0 / std::sqrt(2.0);
  return {[b](double z) { return std::exp(-std::abs(z) / b) / (2.0 * b); },
          -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

inline Density by_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "uniform") return uniform();
  return laplace();
}

/// Integral of g over [a, b] by 61-point Gauss-Kronrod; infinite ends are
/// handled by Boost's own variable changes.
inline double integrate(const std::function<double(double)>& g, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  if (std::isinf(a) && std::isinf(b) && a < 0 && b > 0) {
    return gauss_kronrod<double, 61>::integrate(g, a, 0.0, 15, 1e-14) +
           gauss_kronrod<double, 61>::integrate(g, 0.0, b, 15, 1e-14);
  }
  return gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-14);
}

/// Same integral with the double-exponential rule, for cross-checking.
inline double integrate_tanh_sinh(const std::function<double(double)>& g, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(g, a, b);
}

inline double moment(const Density& d, int power) {
  return integrate([&](double z) { return std::pow(z, power) * d.pdf(z); }, d.lower, d.upper);
}

inline double normal_quantile(double u) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), u);
}

/// Brute-force quantile: bisection on the oracle cdf obtained by quadrature.
inline double quantile(const Density& d, double u) {
  double lo = std::isinf(d.lower) ? -40.0 : d.lower;
  double hi = std::isinf(d.upper) ? 40.0 : d.upper;
  auto cdf = [&](double x) {
    return integrate(d.pdf, std::isinf(d.lower) ? -60.0 : d.lower, x);
  };
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Partition coefficients k_i = integral of z f over [F^-1((i-1)/n), F^-1(i/n)].
inline std::vector<double> partition_k(const Density& d, std::size_t n) {
  std::vector<double> edges{d.lower};
  for (std::size_t i = 1; i < n; ++i) edges.push_back(quantile(d, double(i) / double(n)));
  edges.push_back(d.upper);
  std::vector<double> k;
  for (std::size_t i = 0; i < n; ++i) {
    k.push_back(integrate([&](double z) { return z * d.pdf(z); }, edges[i], edges[i + 1]));
  }
  return k;
}

/// Transport cost between sorted data and the model (mu, sigma), by direct
/// quadrature of (x_i - (mu + sigma z))^2 f(z) over each cell.
inline double cost_by_cells(const Density& d, const std::vector<double>& sorted, double mu,
                            double sigma) {
  const std::size_t n = sorted.size();
  std::vector<double> edges{d.lower};
  for (std::size_t i = 1; i < n; ++i) edges.push_back(quantile(d, double(i) / double(n)));
  edges.push_back(d.upper);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sorted[i];
    total += integrate(
        [&](double z) {
          const double r = x - (mu + sigma * z);
          return r * r * d.pdf(z);
        },
        edges[i], edges[i + 1]);
  }
  return total;
}

}  // namespace oracle
