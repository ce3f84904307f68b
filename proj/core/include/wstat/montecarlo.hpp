#pragma once

// Seeded Monte Carlo harness for the sampling behaviour of the W- and
// ML-estimators of location-scale models.
//
// Trial t draws from its own stream seeded by a hash of (master_seed, t),
// writes its estimates into slot t, and the moments are reduced in trial
// order with pairwise summation. Reports are therefore bit-identical for a
// given seed whatever the thread count.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wstat/densities.hpp"
#include "wstat/model.hpp"
#include "wstat/transport.hpp"

namespace wstat {

enum class Estimator { w, mle };

std::string_view to_string(Estimator estimator) noexcept;
Estimator parse_estimator(std::string_view name);

/// splitmix64 finalizer applied to (master_seed, index).
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index)
      : engine_(derive_stream_seed(master_seed, index)) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// n i.i.d. draws by inverse-cdf sampling, returned sorted.
OrderedSample sample(const LocationScaleModel& model, std::size_t n, RngStream& stream);

struct SimConfig {
  StandardDensity density = make_standard(Family::gaussian);
  double true_mu = 0.0;
  double true_sigma = 1.0;
  std::size_t n = 100;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::vector<Estimator> estimators{Estimator::w, Estimator::mle};
  /// Worker threads; 0 means hardware concurrency.
  std::size_t threads = 1;

  /// Throws InvalidArgumentError on n < 1, trials < 2, sigma <= 0, or an
  /// empty estimator list.
  void validate() const;
};

struct StatisticSummary {
  double mean = 0.0;
  double bias = 0.0;
  /// Unbiased (trials - 1) sample variance.
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  /// n * variance.
  double n_variance = 0.0;
  /// n * variance / sigma^2, and its standard error.
  double scaled_variance = 0.0;
  double scaled_variance_se = 0.0;
};

struct EstimatorReport {
  Estimator estimator = Estimator::w;
  std::size_t successes = 0;
  std::size_t failures = 0;
  StatisticSummary mu;
  StatisticSummary sigma;
  /// n * cov(mu_hat, sigma_hat) and its standard error.
  double n_covariance = 0.0;
  double n_covariance_se = 0.0;
};

/// Observed value of a scaled variance against its asymptotic prediction.
struct TheoryComparison {
  std::string estimator;
  std::string quantity;
  double predicted = 0.0;
  double observed = 0.0;
  double standard_error = 0.0;
  /// (observed - predicted) / standard_error.
  double z_score = 0.0;
};

struct SimReport {
  std::string family;
  double true_mu = 0.0;
  double true_sigma = 1.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  /// Integral of z^4 f, the predicted n V[sigma_hat] / sigma^2 of the W-estimator.
  double fourth_moment = 0.0;
  std::vector<EstimatorReport> estimators;
  std::vector<TheoryComparison> theory;
  /// Some estimator failed on more than half of the trials.
  bool degraded = false;

  const EstimatorReport* find(Estimator estimator) const;
};

SimReport run_simulation(const SimConfig& config);

struct SlopeFit {
  Estimator estimator = Estimator::w;
  /// Least-squares slope of log variance against log n.
  double mu_slope = 0.0;
  double sigma_slope = 0.0;
};

struct SweepReport {
  std::string family;
  std::vector<std::size_t> n_values;
  std::vector<SimReport> runs;
  std::vector<SlopeFit> slopes;
  bool degraded = false;

  const SlopeFit* find(Estimator estimator) const;
};

/// run_simulation at each n (ascending) plus log-log variance slopes.
SweepReport convergence_sweep(const SimConfig& config, std::span<const std::size_t> n_values);

}  // namespace wstat
