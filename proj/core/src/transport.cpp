#include "wstat/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wstat/errors.hpp"
#include "wstat/quadrature.hpp"

namespace wstat {

namespace {

quadrature::Options cell_options() {
  quadrature::Options o;
  o.abs_tol = 1e-16;
  o.rel_tol = 1e-12;
  o.max_intervals = 2000;
  return o;
}

}  // namespace

OrderedSample::OrderedSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptySampleError();
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgumentError("sample contains a non-finite value");
  }
  std::sort(values_.begin(), values_.end());
}

double OrderedSample::empirical_quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw InvalidProbabilityError("empirical quantile needs u in (0, 1]");
  const auto n = static_cast<double>(values_.size());
  auto idx = static_cast<std::size_t>(std::ceil(n * u));
  idx = std::clamp<std::size_t>(idx, 1, values_.size());
  return values_[idx - 1];
}

double OrderedSample::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

double OrderedSample::mean_square() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return acc / static_cast<double>(values_.size());
}

double Partition::boundary(std::size_t i) const {
  if (i == 0) return density.support().lower;
  if (i == n) return density.support().upper;
  return z[i - 1];
}

Partition partition(const StandardDensity& density, std::size_t n) {
  if (n == 0) throw InvalidArgumentError("partition needs n >= 1");
  Partition p{{}, {}, n, density};
  p.z.reserve(n - 1);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i) {
    p.z.push_back(density.quantile(static_cast<double>(i) / nd));
  }
  p.k.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    p.k.push_back(density.partial_first_moment(p.boundary(i - 1), p.boundary(i)));
  }
  return p;
}

double cost_empirical_to_model(const OrderedSample& sample, const LocationScaleModel& model) {
  model.validate();
  return cost_empirical_to_model(sample, model, partition(model.base, sample.size()));
}

double cost_empirical_to_model(const OrderedSample& sample, const LocationScaleModel& model,
                               const Partition& cells) {
  if (cells.n != sample.size()) {
    throw SizeMismatchError("partition size does not match the sample size");
  }
  const auto x = sample.values();
  const double inv_n = 1.0 / static_cast<double>(x.size());
  double cross = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cross += x[i] * (model.sigma * cells.k[i] + model.mu * inv_n);
  }
  return model.mu * model.mu + model.sigma * model.sigma + sample.mean_square() - 2.0 * cross;
}

double cost_interval_sum(const OrderedSample& sample, const LocationScaleModel& model) {
  model.validate();
  const std::size_t n = sample.size();
  const auto nd = static_cast<double>(n);
  const Support support = model.support();
  const auto opt = cell_options();
  double total = 0.0;
  double left = support.lower;
  for (std::size_t i = 0; i < n; ++i) {
    const double right = (i + 1 == n) ? support.upper : model.quantile(static_cast<double>(i + 1) / nd);
    const double xi = sample[i];
    total += quadrature::integrate(
                 [&](double x) {
                   const double d = xi - x;
                   return d * d * model.pdf(x);
                 },
                 left, right, opt)
                 .value;
    left = right;
  }
  return total;
}

ModelCoefficients model_coefficients(const ParametricModel& model, std::span<const double> theta,
                                     std::size_t n) {
  if (n == 0) throw InvalidArgumentError("model_coefficients needs n >= 1");
  if (!model.feasible(theta)) throw InvalidArgumentError("parameter outside the model domain");
  const Support support = model.support(theta);
  const auto opt = cell_options();
  auto pdf = [&](double x) { return model.pdf(x, theta); };

  ModelCoefficients out;
  const auto nd = static_cast<double>(n);
  out.x.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    out.x.push_back(model.quantile(static_cast<double>(i) / nd, theta));
  }

  // Fixed quantile levels split every cell further so that the quadrature
  // sees the scale of the model even when the cells are few and wide.
  static constexpr double kGuideLevels[] = {1e-6, 1e-3, 0.02, 0.1, 0.25, 0.5,
                                            0.75, 0.9,  0.98, 1 - 1e-3, 1 - 1e-6};
  std::vector<double> guides;
  for (double u : kGuideLevels) guides.push_back(model.quantile(u, theta));
  std::sort(guides.begin(), guides.end());

  double mass = 0.0;
  double second = 0.0;
  bool second_ok = true;
  out.k.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i == 0 ? support.lower : out.x[i - 1];
    const double b = i + 1 == n ? support.upper : out.x[i];
    double k = 0.0;
    double left = a;
    auto piece = [&](double right) {
      if (!(right > left)) return;
      mass += quadrature::integrate(pdf, left, right, opt).value;
      k += quadrature::integrate([&](double x) { return x * pdf(x); }, left, right, opt).value;
      const auto s2 = quadrature::integrate([&](double x) { return x * x * pdf(x); }, left, right, opt);
      second += s2.value;
      second_ok = second_ok && (s2.converged || s2.abs_error <= 1e-8 * std::max(1.0, std::abs(s2.value)));
      left = right;
    };
    for (auto it = std::upper_bound(guides.begin(), guides.end(), a);
         it != guides.end() && *it < b; ++it) {
      piece(*it);
    }
    piece(b);
    out.k.push_back(k);
  }
  out.mass = mass;
  if (!std::isfinite(mass) || std::abs(mass - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "model density integrates to " << mass << ", not 1";
    throw NonIntegrableError(msg.str());
  }
  if (!std::isfinite(second) || !second_ok) {
    throw NonIntegrableError("model density has no finite second moment");
  }
  out.second_moment = second;
  return out;
}

double cost_general(const OrderedSample& sample, const ParametricModel& model,
                    std::span<const double> theta) {
  const auto coeffs = model_coefficients(model, theta, sample.size());
  const auto x = sample.values();
  double cross = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cross += coeffs.k[i] * x[i];
  return sample.mean_square() - 2.0 * cross + coeffs.second_moment;
}

double w2_squared_models(const LocationScaleModel& first, const LocationScaleModel& second) {
  first.validate();
  second.validate();
  quadrature::Options opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-11;
  opt.max_intervals = 10000;
  auto integrand = [&](double u) {
    const double d = first.quantile(u) - second.quantile(u);
    return d * d;
  };
  // Splitting at the median keeps both singular ends well resolved.
  return quadrature::integrate(integrand, 0.0, 0.5, opt).value +
         quadrature::integrate(integrand, 0.5, 1.0, opt).value;
}

double w2_squared_samples(const OrderedSample& first, const OrderedSample& second) {
  if (first.size() != second.size()) {
    throw SizeMismatchError("w2_squared_samples needs samples of equal size");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double d = first[i] - second[i];
    acc += d * d;
  }
  return acc / static_cast<double>(first.size());
}

}  // namespace wstat
