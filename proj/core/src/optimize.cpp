#include "wstat/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wstat/errors.hpp"

namespace wstat::optimize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, std::span<const double> x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

bool safe_residual(const Residual& r, std::span<const double> x, Eigen::VectorXd& out) {
  try {
    const auto v = r(x);
    out = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    return out.allFinite();
  } catch (const Error&) {
    return false;
  }
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          const SimplexOptions& options) {
  const std::size_t d = x0.size();
  if (d == 0) throw InvalidArgumentError("nelder_mead needs at least one coordinate");

  std::vector<std::vector<double>> v(d + 1, x0);
  for (std::size_t j = 0; j < d; ++j) {
    v[j + 1][j] += options.initial_scale * std::max(1.0, std::abs(x0[j]));
  }
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = safe_eval(f, v[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  SimplexResult out;
  auto point = [&](double t, std::vector<double>& dst) {
    const auto& worst = v[order[d]];
    for (std::size_t j = 0; j < d; ++j) dst[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const auto& best = v[order[0]];
    double diameter = 0.0;
    double scale = 1.0;
    for (std::size_t j = 0; j < d; ++j) scale = std::max(scale, std::abs(best[j]));
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        diameter = std::max(diameter, std::abs(v[order[i]][j] - best[j]));
      }
    }
    if (diameter <= options.tolerance * scale && std::isfinite(fv[order[0]])) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += v[order[i]][j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    const std::size_t worst = order[d];
    const double f_best = fv[order[0]];
    const double f_second = fv[order[d - 1]];
    const double f_worst = fv[worst];

    point(-1.0, trial);
    const double f_reflect = safe_eval(f, trial);
    if (f_reflect < f_best) {
      point(-2.0, trial2);
      const double f_expand = safe_eval(f, trial2);
      if (f_expand < f_reflect) {
        v[worst] = trial2;
        fv[worst] = f_expand;
      } else {
        v[worst] = trial;
        fv[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < f_second) {
      v[worst] = trial;
      fv[worst] = f_reflect;
      continue;
    }
    // Outside contraction if the reflection improved on the worst point.
    const bool outside = f_reflect < f_worst;
    point(outside ? -0.5 : 0.5, trial2);
    const double f_contract = safe_eval(f, trial2);
    if (f_contract < (outside ? f_reflect : f_worst)) {
      v[worst] = trial2;
      fv[worst] = f_contract;
      continue;
    }
    const auto anchor = v[order[0]];
    for (std::size_t i = 1; i <= d; ++i) {
      auto& p = v[order[i]];
      for (std::size_t j = 0; j < d; ++j) p[j] = anchor[j] + 0.5 * (p[j] - anchor[j]);
      fv[order[i]] = safe_eval(f, p);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  out.x = v[best];
  out.value = fv[best];
  out.iterations = it;
  return out;
}

RootResult broyden(const Residual& r, std::vector<double> x0, const RootOptions& options) {
  const auto d = static_cast<Eigen::Index>(x0.size());
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), d);
  Eigen::VectorXd fx;
  RootResult out;
  if (!safe_residual(r, as_span(x), fx) || fx.size() != d) {
    throw InvalidArgumentError("residual is not finite at the starting point");
  }

  Eigen::MatrixXd jac(d, d);
  Eigen::VectorXd probe(d), fp(d), fm(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = options.jacobian_step * std::max(1.0, std::abs(x[j]));
    probe = x;
    probe[j] = x[j] + h;
    const bool ok_plus = safe_residual(r, as_span(probe), fp);
    probe[j] = x[j] - h;
    const bool ok_minus = safe_residual(r, as_span(probe), fm);
    if (ok_plus && ok_minus) {
      jac.col(j) = (fp - fm) / (2.0 * h);
    } else if (ok_plus) {
      jac.col(j) = (fp - fx) / h;
    } else if (ok_minus) {
      jac.col(j) = (fx - fm) / h;
    } else {
      throw InvalidArgumentError("residual undefined around the starting point");
    }
  }

  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    out.residual_norm = fx.norm();
    if (out.residual_norm <= options.residual_tolerance) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-fx);
    if (!step.allFinite()) break;
    double t = 1.0;
    Eigen::VectorXd x_new(d), f_new(d);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + t * step;
      if (safe_residual(r, as_span(x_new), f_new) && f_new.norm() < fx.norm()) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    const double rel_step = (t * step).norm() / std::max(1.0, x.norm());
    if (!accepted) {
      out.stalled = rel_step <= std::sqrt(options.step_tolerance);
      break;
    }
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = f_new - fx;
    const double ss = s.squaredNorm();
    if (ss > 0.0) jac += ((y - jac * s) * s.transpose()) / ss;
    x = x_new;
    fx = f_new;
    if (rel_step <= options.step_tolerance) {
      out.residual_norm = fx.norm();
      out.converged = out.residual_norm <= options.residual_tolerance;
      out.stalled = !out.converged;
      ++it;
      break;
    }
  }
  out.residual_norm = fx.norm();
  if (out.residual_norm <= options.residual_tolerance) out.converged = true;
  out.x.assign(x.data(), x.data() + d);
  out.iterations = it;
  return out;
}

}  // namespace wstat::optimize
