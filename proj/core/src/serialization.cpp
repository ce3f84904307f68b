#include "wstat/serialization.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

namespace wstat {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(std::span<const double> v) {
  json arr = json::array();
  for (double x : v) arr.push_back(number(x));
  return arr;
}

// Shortest decimal that round-trips.
std::string full_precision(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::pair<const char*, double> stat_rows(const StatisticSummary& s, int i) {
  switch (i) {
    case 0:
      return {"mean", s.mean};
    case 1:
      return {"bias", s.bias};
    case 2:
      return {"variance", s.variance};
    case 3:
      return {"n_variance", s.n_variance};
    case 4:
      return {"scaled_variance", s.scaled_variance};
    case 5:
      return {"scaled_variance_se", s.scaled_variance_se};
    case 6:
      return {"se_mean", s.se_mean};
    default:
      return {"se_variance", s.se_variance};
  }
}

void csv_rows(std::ostream& out, const SimReport& report) {
  for (const auto& e : report.estimators) {
    const auto name = to_string(e.estimator);
    for (const auto& [param, summary] : {std::pair{"mu", &e.mu}, std::pair{"sigma", &e.sigma}}) {
      for (int i = 0; i < 8; ++i) {
        const auto [stat, value] = stat_rows(*summary, i);
        out << report.n << ',' << name << ',' << param << ',' << stat << ','
            << full_precision(value) << '\n';
      }
    }
    out << report.n << ',' << name << ",mu_sigma,n_covariance," << full_precision(e.n_covariance)
        << '\n';
    out << report.n << ',' << name << ",mu_sigma,n_covariance_se,"
        << full_precision(e.n_covariance_se) << '\n';
  }
}

}  // namespace

nlohmann::json to_json(const FitResult& fit) {
  json j;
  j["method"] = std::string(to_string(fit.method));
  j["theta"] = vector_json(fit.theta_hat);
  if (fit.theta_hat.size() == 2) {
    j["mu"] = number(fit.theta_hat[0]);
    j["sigma"] = number(fit.theta_hat[1]);
  }
  j["cost"] = number(fit.cost);
  j["warnings"] = fit.warnings;
  j["iterations"] = fit.iterations;
  if (fit.method == FitMethod::mle) j["log_likelihood"] = number(fit.log_likelihood);
  if (!fit.local_minima.empty()) {
    json minima = json::array();
    for (const auto& m : fit.local_minima) {
      minima.push_back({{"theta", vector_json(m.theta)}, {"cost", number(m.cost)}});
    }
    j["local_minima"] = std::move(minima);
  }
  return j;
}

nlohmann::json to_json(const MetricTensor& tensor) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < tensor.g.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < tensor.g.cols(); ++k) row.push_back(number(tensor.g(i, k)));
    rows.push_back(std::move(row));
  }
  return {{"theta", vector_json(tensor.theta)},
          {"g", std::move(rows)},
          {"deviation_from_identity", number(tensor.deviation_from_identity())},
          {"min_eigenvalue", number(tensor.min_eigenvalue())},
          {"quadrature_error_estimate", number(tensor.quadrature_error_estimate)},
          {"excluded_mass", number(tensor.excluded_mass)}};
}

nlohmann::json to_json(const EuclideanReport& report) {
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"mu", number(p.mu)},
                      {"sigma", number(p.sigma)},
                      {"deviation", number(p.deviation)},
                      {"tensor", to_json(p.tensor)}});
  }
  json expansions = json::array();
  for (const auto& e : report.expansions) {
    expansions.push_back({{"mu", number(e.mu)},
                          {"sigma", number(e.sigma)},
                          {"d_mu", number(e.d_mu)},
                          {"d_sigma", number(e.d_sigma)},
                          {"ratio", number(e.ratio)}});
  }
  return {{"family", report.family},
          {"points", std::move(points)},
          {"expansions", std::move(expansions)},
          {"max_deviation", number(report.max_deviation)},
          {"max_ratio_deviation", number(report.max_ratio_deviation)}};
}

nlohmann::json to_json(const StatisticSummary& s) {
  return {{"mean", number(s.mean)},
          {"bias", number(s.bias)},
          {"variance", number(s.variance)},
          {"se_mean", number(s.se_mean)},
          {"se_variance", number(s.se_variance)},
          {"n_variance", number(s.n_variance)},
          {"scaled_variance", number(s.scaled_variance)},
          {"scaled_variance_se", number(s.scaled_variance_se)}};
}

nlohmann::json to_json(const EstimatorReport& r) {
  return {{"estimator", std::string(to_string(r.estimator))},
          {"successes", r.successes},
          {"failures", r.failures},
          {"mu", to_json(r.mu)},
          {"sigma", to_json(r.sigma)},
          {"n_covariance", number(r.n_covariance)},
          {"n_covariance_se", number(r.n_covariance_se)}};
}

nlohmann::json to_json(const SimReport& report) {
  json estimators = json::object();
  for (const auto& e : report.estimators) {
    estimators[std::string(to_string(e.estimator))] = to_json(e);
  }
  json theory = json::array();
  for (const auto& t : report.theory) {
    theory.push_back({{"estimator", t.estimator},
                      {"quantity", t.quantity},
                      {"predicted", number(t.predicted)},
                      {"observed", number(t.observed)},
                      {"standard_error", number(t.standard_error)},
                      {"z_score", number(t.z_score)}});
  }
  return {{"family", report.family},
          {"true_mu", number(report.true_mu)},
          {"true_sigma", number(report.true_sigma)},
          {"n", report.n},
          {"trials", report.trials},
          {"seed", report.master_seed},
          {"theoretical",
           {{"n_var_mu_over_sigma2", 1.0},
            {"n_var_sigma_over_sigma2", number(report.fourth_moment)}}},
          {"estimators", std::move(estimators)},
          {"theory_check", std::move(theory)},
          {"degraded", report.degraded}};
}

nlohmann::json to_json(const SweepReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back(to_json(r));
  json slopes = json::object();
  for (const auto& s : report.slopes) {
    slopes[std::string(to_string(s.estimator))] = {{"mu", number(s.mu_slope)},
                                                    {"sigma", number(s.sigma_slope)}};
  }
  return {{"family", report.family},
          {"n_values", report.n_values},
          {"slopes", std::move(slopes)},
          {"runs", std::move(runs)},
          {"degraded", report.degraded}};
}

void write_csv(std::ostream& out, const SimReport& report, bool header) {
  if (header) out << "n,estimator,parameter,statistic,value\n";
  csv_rows(out, report);
}

void write_csv(std::ostream& out, const SweepReport& report) {
  out << "n,estimator,parameter,statistic,value\n";
  for (const auto& r : report.runs) csv_rows(out, r);
}

}  // namespace wstat
