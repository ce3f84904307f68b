#include "wstat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "wstat/errors.hpp"
#include "wstat/estimation.hpp"

namespace wstat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Pairwise summation keeps the rounding error O(log n) and, unlike a
// compensated running sum, is a fixed function of the input order.
template <class F>
double pairwise_sum(std::size_t begin, std::size_t end, const F& term) {
  if (end - begin <= 16) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

struct TrialOutcomes {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<unsigned char> ok;
};

StatisticSummary summarize(std::span<const double> values, double truth, double n,
                           double sigma2) {
  StatisticSummary s;
  const std::size_t m = values.size();
  if (m == 0) {
    s.mean = s.bias = s.variance = s.se_mean = s.se_variance = kNaN;
    s.n_variance = s.scaled_variance = s.scaled_variance_se = kNaN;
    return s;
  }
  const double md = static_cast<double>(m);
  s.mean = pairwise_sum(0, m, [&](std::size_t i) { return values[i]; }) / md;
  s.bias = s.mean - truth;
  if (m < 2) {
    s.variance = s.se_mean = s.se_variance = kNaN;
    s.n_variance = s.scaled_variance = s.scaled_variance_se = kNaN;
    return s;
  }
  const double ss = pairwise_sum(0, m, [&](std::size_t i) {
    const double d = values[i] - s.mean;
    return d * d;
  });
  const double m4 = pairwise_sum(0, m, [&](std::size_t i) {
                      const double d = values[i] - s.mean;
                      return d * d * d * d;
                    }) /
                    md;
  s.variance = ss / (md - 1.0);
  s.se_mean = std::sqrt(s.variance / md);
  const double v2 = s.variance * s.variance;
  s.se_variance = std::sqrt(std::max(0.0, (m4 - v2 * (md - 3.0) / (md - 1.0)) / md));
  s.n_variance = n * s.variance;
  s.scaled_variance = s.n_variance / sigma2;
  s.scaled_variance_se = n * s.se_variance / sigma2;
  return s;
}

EstimatorReport aggregate(Estimator estimator, const TrialOutcomes& out, const SimConfig& cfg) {
  EstimatorReport rep;
  rep.estimator = estimator;
  std::vector<double> mu, sigma;
  mu.reserve(out.ok.size());
  sigma.reserve(out.ok.size());
  for (std::size_t t = 0; t < out.ok.size(); ++t) {
    if (!out.ok[t]) continue;
    mu.push_back(out.mu[t]);
    sigma.push_back(out.sigma[t]);
  }
  rep.successes = mu.size();
  rep.failures = out.ok.size() - mu.size();
  const double n = static_cast<double>(cfg.n);
  const double s2 = cfg.true_sigma * cfg.true_sigma;
  rep.mu = summarize(mu, cfg.true_mu, n, s2);
  rep.sigma = summarize(sigma, cfg.true_sigma, n, s2);

  const std::size_t m = mu.size();
  if (m >= 2) {
    const double md = static_cast<double>(m);
    auto product = [&](std::size_t i) { return (mu[i] - rep.mu.mean) * (sigma[i] - rep.sigma.mean); };
    const double cov = pairwise_sum(0, m, product) / (md - 1.0);
    const double mean_product = pairwise_sum(0, m, product) / md;
    const double var_product = pairwise_sum(0, m, [&](std::size_t i) {
                                 const double d = product(i) - mean_product;
                                 return d * d;
                               }) /
                               (md - 1.0);
    rep.n_covariance = n * cov;
    rep.n_covariance_se = n * std::sqrt(var_product / md);
  } else {
    rep.n_covariance = rep.n_covariance_se = kNaN;
  }
  return rep;
}

TheoryComparison compare(std::string estimator, std::string quantity, double predicted,
                         const StatisticSummary& s) {
  TheoryComparison c{std::move(estimator), std::move(quantity), predicted, s.scaled_variance,
                     s.scaled_variance_se, kNaN};
  if (s.scaled_variance_se > 0.0) c.z_score = (c.observed - c.predicted) / c.standard_error;
  return c;
}

std::size_t resolve_threads(std::size_t requested, std::size_t trials) {
  std::size_t t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::clamp<std::size_t>(t, 1, std::max<std::size_t>(1, trials));
}

}  // namespace

std::string_view to_string(Estimator estimator) noexcept {
  return estimator == Estimator::w ? "w" : "mle";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "w") return Estimator::w;
  if (name == "mle") return Estimator::mle;
  throw InvalidArgumentError("unknown estimator '" + std::string(name) + "'");
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

OrderedSample sample(const LocationScaleModel& model, std::size_t n, RngStream& stream) {
  if (n == 0) throw InvalidArgumentError("sample size must be at least 1");
  std::vector<double> values(n);
  for (double& v : values) v = model.quantile(stream.uniform_open());
  return OrderedSample(std::move(values));
}

void SimConfig::validate() const {
  if (n < 1) throw InvalidArgumentError("n must be at least 1");
  if (trials < 2) throw InvalidArgumentError("trials must be at least 2");
  if (!(true_sigma > 0.0) || !std::isfinite(true_sigma)) {
    throw InvalidArgumentError("sigma must be positive and finite");
  }
  if (!std::isfinite(true_mu)) throw InvalidArgumentError("mu must be finite");
  if (estimators.empty()) throw InvalidArgumentError("at least one estimator is required");
}

const EstimatorReport* SimReport::find(Estimator estimator) const {
  for (const auto& e : estimators) {
    if (e.estimator == estimator) return &e;
  }
  return nullptr;
}

SimReport run_simulation(const SimConfig& config) {
  config.validate();
  std::vector<Estimator> estimators;
  for (Estimator e : config.estimators) {
    if (std::find(estimators.begin(), estimators.end(), e) == estimators.end()) {
      estimators.push_back(e);
    }
  }

  const LocationScaleModel model{config.density, config.true_mu, config.true_sigma};
  const Partition cells = partition(config.density, config.n);
  std::vector<TrialOutcomes> outcomes(estimators.size());
  for (auto& o : outcomes) {
    o.mu.assign(config.trials, kNaN);
    o.sigma.assign(config.trials, kNaN);
    o.ok.assign(config.trials, 0);
  }

  auto run_trial = [&](std::size_t t) {
    RngStream stream(config.master_seed, t);
    const OrderedSample s = sample(model, config.n, stream);
    for (std::size_t e = 0; e < estimators.size(); ++e) {
      try {
        const FitResult fit = estimators[e] == Estimator::w
                                  ? fit_w_location_scale(s, cells)
                                  : fit_mle_location_scale(s, config.density);
        outcomes[e].mu[t] = fit.mu();
        outcomes[e].sigma[t] = fit.sigma();
        outcomes[e].ok[t] = 1;
      } catch (const Error&) {
        outcomes[e].ok[t] = 0;
      }
    }
  };

  const std::size_t workers = resolve_threads(config.threads, config.trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    constexpr std::size_t kChunk = 32;
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= config.trials) return;
          const std::size_t end = std::min(begin + kChunk, config.trials);
          for (std::size_t t = begin; t < end; ++t) run_trial(t);
        }
      });
    }
  }

  SimReport report;
  report.family = config.density.name();
  report.true_mu = config.true_mu;
  report.true_sigma = config.true_sigma;
  report.n = config.n;
  report.trials = config.trials;
  report.master_seed = config.master_seed;
  report.fourth_moment = config.density.fourth_moment();
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    report.estimators.push_back(aggregate(estimators[e], outcomes[e], config));
    const auto& rep = report.estimators.back();
    if (2 * rep.failures > config.trials) report.degraded = true;
  }
  if (const auto* w = report.find(Estimator::w)) {
    report.theory.push_back(compare("w", "n_var_mu_over_sigma2", 1.0, w->mu));
    report.theory.push_back(compare("w", "n_var_sigma_over_sigma2", report.fourth_moment, w->sigma));
  }
  return report;
}

const SlopeFit* SweepReport::find(Estimator estimator) const {
  for (const auto& s : slopes) {
    if (s.estimator == estimator) return &s;
  }
  return nullptr;
}

SweepReport convergence_sweep(const SimConfig& config, std::span<const std::size_t> n_values) {
  if (n_values.size() < 2) throw InvalidArgumentError("a sweep needs at least two sample sizes");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (!(n_values[i] > n_values[i - 1])) {
      throw InvalidArgumentError("sweep sample sizes must be strictly ascending");
    }
  }
  SweepReport sweep;
  sweep.family = config.density.name();
  sweep.n_values.assign(n_values.begin(), n_values.end());
  for (std::size_t n : n_values) {
    SimConfig c = config;
    c.n = n;
    sweep.runs.push_back(run_simulation(c));
    sweep.degraded = sweep.degraded || sweep.runs.back().degraded;
  }

  auto slope = [&](auto&& variance_of) {
    const std::size_t m = n_values.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
      xs[i] = std::log(static_cast<double>(n_values[i]));
      ys[i] = std::log(variance_of(sweep.runs[i]));
      sx += xs[i];
      sy += ys[i];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
  };
  for (const auto& est : sweep.runs.front().estimators) {
    const Estimator e = est.estimator;
    SlopeFit fit;
    fit.estimator = e;
    fit.mu_slope = slope([e](const SimReport& r) { return r.find(e)->mu.variance; });
    fit.sigma_slope = slope([e](const SimReport& r) { return r.find(e)->sigma.variance; });
    sweep.slopes.push_back(fit);
  }
  return sweep;
}

}  // namespace wstat
