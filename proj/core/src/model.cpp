#include "wstat/model.hpp"

#include <cmath>
#include <limits>

#include "wstat/errors.hpp"

namespace wstat {

void LocationScaleModel::validate() const {
  if (!std::isfinite(mu)) throw InvalidArgumentError("location must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgumentError("scale must be positive and finite");
  }
}

double ParametricModel::quantile(double u, std::span<const double> theta) const {
  if (!(u > 0.0 && u < 1.0)) throw InvalidProbabilityError("probability outside (0, 1)");
  const Support s = support(theta);
  double lo = s.lower;
  double hi = s.upper;
  if (!s.bounded_below()) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    double step = 1.0;
    while (cdf(lo, theta) > u) {
      step *= 2.0;
      lo -= step;
      if (step > 1e12) throw BracketExpansionError("model quantile: lower bracket diverged");
    }
  }
  if (!s.bounded_above()) {
    hi = std::isfinite(lo) ? lo + 1.0 : 1.0;
    double step = 1.0;
    while (cdf(hi, theta) < u) {
      step *= 2.0;
      hi += step;
      if (step > 1e12) throw BracketExpansionError("model quantile: upper bracket diverged");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double resid = cdf(mid, theta) - u;
    if (resid == 0.0) return mid;
    (resid < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool ParametricModel::feasible(std::span<const double> theta) const {
  for (double t : theta) {
    if (!std::isfinite(t)) return false;
  }
  return theta.size() == dimension();
}

std::vector<std::string> ParametricModel::parameter_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dimension(); ++i) names.push_back("theta" + std::to_string(i));
  return names;
}

double LocationScaleFamily::pdf(double x, std::span<const double> theta) const {
  return base_.pdf((x - theta[0]) / theta[1]) / theta[1];
}

double LocationScaleFamily::cdf(double x, std::span<const double> theta) const {
  return base_.cdf((x - theta[0]) / theta[1]);
}

Support LocationScaleFamily::support(std::span<const double> theta) const {
  const Support s = base_.support();
  return {theta[0] + theta[1] * s.lower, theta[0] + theta[1] * s.upper};
}

double LocationScaleFamily::quantile(double u, std::span<const double> theta) const {
  return theta[0] + theta[1] * base_.quantile(u);
}

bool LocationScaleFamily::feasible(std::span<const double> theta) const {
  return theta.size() == 2 && std::isfinite(theta[0]) && std::isfinite(theta[1]) &&
         theta[1] > 0.0;
}

}  // namespace wstat
