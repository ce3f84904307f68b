#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration.
//
// Infinite endpoints are mapped onto finite ones before subdivision:
//   [a, +inf)   x = a + t / (1 - t),      t in [0, 1)
//   (-inf, b]   x = b - (1 - t) / t,      t in (0, 1]
//   (-inf, inf) x = t / (1 - t^2),        t in (-1, 1)
// Nodes never touch the interval ends, so integrable endpoint singularities
// are handled without special casing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace wstat::quadrature {

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    kronrod += kKronrodWeights[j] * (f1[j] + f2[j]);
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  asc *= scale;
  abs_sum *= scale;
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * abs_sum, err);
  }
  return {a, b, kronrod * half, err};
}

template <class F>
Result adaptive(F& f, double a, double b, const Options& opt) {
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  heap.push(first);
  double total = first.value;
  double error = first.error;
  std::size_t evaluations = 15;
  std::size_t intervals = 1;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
         intervals < opt.max_intervals) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      break;  // interval at machine resolution
    }
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    evaluations += 30;
    ++intervals;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.abs_error = err;
  out.evaluations = evaluations;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) &&
                  std::isfinite(value);
  return out;
}

}  // namespace detail

/// Integrates f over [a, b]; either bound may be infinite.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (a > b) {
    Result r = integrate(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  const bool lower_inf = std::isinf(a);
  const bool upper_inf = std::isinf(b);
  if (!lower_inf && !upper_inf) {
    return detail::adaptive(f, a, b, opt);
  }
  if (lower_inf && upper_inf) {
    auto g = [&f](double t) {
      const double d = 1.0 - t * t;
      const double x = t / d;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v * (1.0 + t * t) / (d * d);
    };
    return detail::adaptive(g, -1.0, 1.0, opt);
  }
  if (upper_inf) {
    auto g = [&f, a](double t) {
      const double d = 1.0 - t;
      const double v = f(a + t / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    return detail::adaptive(g, 0.0, 1.0, opt);
  }
  auto g = [&f, b](double t) {
    const double v = f(b - (1.0 - t) / t);
    return v == 0.0 ? 0.0 : v / (t * t);
  };
  return detail::adaptive(g, 0.0, 1.0, opt);
}

}  // namespace wstat::quadrature
