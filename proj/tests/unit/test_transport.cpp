#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wstat/densities.hpp"
#include "wstat/errors.hpp"
#include "wstat/model.hpp"
#include "wstat/transport.hpp"

namespace {

using wstat::Family;
using wstat::LocationScaleModel;
using wstat::make_standard;
using wstat::OrderedSample;

std::vector<double> random_data(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

TEST(OrderedSample, SortsAndSummarizes) {
  const OrderedSample s({3.0, -1.0, 2.0});
  EXPECT_EQ(s[0], -1.0);
  EXPECT_EQ(s[2], 3.0);
  EXPECT_DOUBLE_EQ(s.mean(), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.mean_square(), 14.0 / 3.0);
  EXPECT_EQ(s.empirical_quantile(0.34), 2.0);
  EXPECT_EQ(s.empirical_quantile(1.0 / 3.0), -1.0);
}

TEST(OrderedSample, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(OrderedSample({}), wstat::EmptySampleError);
  EXPECT_THROW(OrderedSample({1.0, std::nan("")}), wstat::InvalidArgumentError);
  EXPECT_THROW(OrderedSample({INFINITY}), wstat::InvalidArgumentError);
}

TEST(Partition, GaussianTwoCells) {
  const auto p = wstat::partition(make_standard(Family::gaussian), 2);
  ASSERT_EQ(p.z.size(), 1u);
  ASSERT_EQ(p.k.size(), 2u);
  EXPECT_NEAR(p.z[0], 0.0, 1e-15);
  const double ref = 1.0 / std::sqrt(2.0 * oracle::kPi);
  const auto k = oracle::partition_k(oracle::gaussian(), 2);
  EXPECT_NEAR(k[1], ref, 1e-12);
  EXPECT_NEAR(p.k[0], -ref, 1e-14);
  EXPECT_NEAR(p.k[1], ref, 1e-14);
}

TEST(Partition, UniformThreeCells) {
  const auto p = wstat::partition(make_standard(Family::uniform), 3);
  const double r3 = std::sqrt(3.0);
  EXPECT_NEAR(p.z[0], -r3 / 3.0, 1e-15);
  EXPECT_NEAR(p.z[1], r3 / 3.0, 1e-15);
  const auto k = oracle::partition_k(oracle::uniform(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.k[i], k[i], 1e-12);
  EXPECT_NEAR(p.k[0], -2.0 / (3.0 * r3), 1e-15);
  EXPECT_NEAR(p.k[1], 0.0, 1e-15);
}

TEST(Partition, SingleCellHasZeroCoefficient) {
  for (auto fam : {Family::gaussian, Family::uniform, Family::laplace}) {
    const auto p = wstat::partition(make_standard(fam), 1);
    EXPECT_TRUE(p.z.empty());
    ASSERT_EQ(p.k.size(), 1u);
    EXPECT_NEAR(p.k[0], 0.0, 1e-15);
  }
}

TEST(Partition, RejectsZeroCells) {
  EXPECT_THROW(wstat::partition(make_standard(Family::gaussian), 0), wstat::InvalidArgumentError);
}

class PartitionInvariants
    : public ::testing::TestWithParam<std::tuple<std::string, std::size_t>> {};

TEST_P(PartitionInvariants, Hold) {
  const auto& [family, n] = GetParam();
  const auto d = make_standard(family);
  const auto p = wstat::partition(d, n);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += p.k[i];
    sum_sq += p.k[i] * p.k[i];
    if (i + 1 < n) {
      EXPECT_NEAR(d.cdf(p.z[i]), double(i + 1) / double(n), 1e-12);
      if (i > 0) EXPECT_GT(p.z[i], p.z[i - 1]);
    }
    const double a = p.boundary(i), b = p.boundary(i + 1);
    EXPECT_GE(p.k[i] * double(n), a - 1e-9);
    EXPECT_LE(p.k[i] * double(n), b + 1e-9);
  }
  EXPECT_NEAR(sum, 0.0, 1e-12);
  // Cell means n k_i are the conditional means; their mean square is at most 1.
  EXPECT_LE(double(n) * sum_sq, 1.0 + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(
    Families, PartitionInvariants,
    ::testing::Combine(::testing::Values("gaussian", "uniform", "laplace"),
                       ::testing::Values(std::size_t{2}, std::size_t{7}, std::size_t{100},
                                         std::size_t{1000})));

TEST(Partition, MatchesOracleForSmallN) {
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    const auto p = wstat::partition(make_standard(fam), 5);
    const auto k = oracle::partition_k(oracle::by_name(fam), 5);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(p.k[i], k[i], 1e-10) << fam << i;
  }
}

TEST(Partition, InteriorCellMeansApproachMidpoints) {
  // |n k_i - (z_{i-1} + z_i)/2| shrinks like 1/n away from the tails.
  const auto d = make_standard(Family::gaussian);
  auto worst = [&](std::size_t n) {
    const auto p = wstat::partition(d, n);
    double w = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
      w = std::max(w, std::abs(double(n) * p.k[i] - 0.5 * (p.boundary(i) + p.boundary(i + 1))));
    }
    return w;
  };
  const double w100 = worst(100), w1000 = worst(1000);
  EXPECT_LT(w1000, w100 / 50.0);
}

TEST(Cost, SingleAtomPaysModelVariance) {
  const OrderedSample s({1.7});
  const LocationScaleModel m{make_standard(Family::laplace), 1.7, 2.5};
  EXPECT_NEAR(wstat::cost_empirical_to_model(s, m), 2.5 * 2.5, 1e-12);
  const OrderedSample zero({0.0});
  EXPECT_NEAR(wstat::cost_empirical_to_model(zero, {make_standard(Family::gaussian), 0.0, 1.0}),
              1.0, 1e-15);
}

TEST(Cost, RepresentativePointsCostLittle) {
  const auto d = make_standard(Family::gaussian);
  const std::size_t n = 1000;
  const auto p = wstat::partition(d, n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 2.0 + 3.0 * double(n) * p.k[i];
  const double c = wstat::cost_empirical_to_model(OrderedSample(x), {d, 2.0, 3.0});
  EXPECT_GE(c, -1e-12);
  EXPECT_LE(c / 9.0, 0.01);
}

TEST(Cost, ClosedFormAgreesWithCellOracle) {
  std::mt19937_64 rng(7);
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    const auto x = random_data(rng, 6, 2.0);
    const OrderedSample s(x);
    const LocationScaleModel m{make_standard(fam), 0.4, 1.3};
    std::vector<double> sorted(s.values().begin(), s.values().end());
    const double ref = oracle::cost_by_cells(oracle::by_name(fam), sorted, 0.4, 1.3);
    EXPECT_NEAR(wstat::cost_empirical_to_model(s, m), ref, 1e-9) << fam;
    EXPECT_NEAR(wstat::cost_interval_sum(s, m), ref, 1e-9) << fam;
  }
}

TEST(Cost, QuadraticInParameters) {
  // C(mu, sigma) = C(mu0, sigma0) + gradient term + |d theta|^2 exactly.
  std::mt19937_64 rng(3);
  const OrderedSample s(random_data(rng, 40));
  const auto d = make_standard(Family::laplace);
  auto C = [&](double mu, double sigma) { return wstat::cost_empirical_to_model(s, {d, mu, sigma}); };
  const double h = 0.37;
  const double second_mu = C(0.2 + h, 1.0) - 2.0 * C(0.2, 1.0) + C(0.2 - h, 1.0);
  const double second_sigma = C(0.2, 1.0 + h) - 2.0 * C(0.2, 1.0) + C(0.2, 1.0 - h);
  EXPECT_NEAR(second_mu, 2.0 * h * h, 1e-12);
  EXPECT_NEAR(second_sigma, 2.0 * h * h, 1e-12);
}

TEST(Cost, GeneralPathAgreesWithLocationScale) {
  std::mt19937_64 rng(11);
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    const OrderedSample s(random_data(rng, 25));
    const auto d = make_standard(fam);
    const wstat::LocationScaleFamily model(d);
    const std::vector<double> theta{-0.3, 0.8};
    EXPECT_NEAR(wstat::cost_general(s, model, theta),
                wstat::cost_empirical_to_model(s, {d, theta[0], theta[1]}), 1e-9)
        << fam;
  }
}

TEST(Cost, GeneralPathIsMinimalAtTruthForLargeN) {
  const auto d = make_standard(Family::gaussian);
  const std::size_t n = 2000;
  const auto p = wstat::partition(d, n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 2.0 * double(n) * p.k[i];
  const OrderedSample s(x);
  const wstat::LocationScaleFamily model(d);
  const std::vector<double> truth{1.0, 2.0};
  const double c0 = wstat::cost_general(s, model, truth);
  for (double dm : {-0.05, 0.0, 0.05}) {
    for (double ds : {-0.05, 0.0, 0.05}) {
      if (dm == 0.0 && ds == 0.0) continue;
      const std::vector<double> t{1.0 + dm, 2.0 + ds};
      EXPECT_LT(c0, wstat::cost_general(s, model, t));
    }
  }
}

TEST(Cost, InvalidModelIsRejected) {
  const OrderedSample s({1.0, 2.0});
  EXPECT_THROW(wstat::cost_empirical_to_model(s, {make_standard(Family::gaussian), 0.0, 0.0}),
               wstat::InvalidArgumentError);
}

TEST(Distance, ModelExamples) {
  const auto g = make_standard(Family::gaussian);
  const auto u = make_standard(Family::uniform);
  EXPECT_NEAR(wstat::w2_squared_models({g, 0.0, 1.0}, {g, 1.0, 2.0}), 2.0, 1e-6);
  EXPECT_NEAR(wstat::w2_squared_models({u, 0.0, 1.0}, {u, 3.0, 1.0}), 9.0, 1e-6);
  EXPECT_NEAR(wstat::w2_squared_models({g, 0.5, 1.5}, {g, 0.5, 1.5}), 0.0, 1e-12);
}

TEST(Distance, MixedFamiliesMatchQuantileOracle) {
  // W2^2 between N(0,1) and the standard uniform: 2 - 2 E[Z F_u^{-1}(Phi(Z))].
  const auto g = make_standard(Family::gaussian);
  const auto u = make_standard(Family::uniform);
  const double cross = oracle::integrate(
      [](double z) {
        const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * oracle::kPi);
        const double big_phi = 0.5 * std::erfc(-z / std::sqrt(2.0));
        return z * std::sqrt(3.0) * (2.0 * big_phi - 1.0) * phi;
      },
      -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(wstat::w2_squared_models({g, 0.0, 1.0}, {u, 0.0, 1.0}), 2.0 - 2.0 * cross, 1e-9);
}

TEST(Distance, SampleExamples) {
  EXPECT_EQ(wstat::w2_squared_samples(OrderedSample({0.0, 1.0}), OrderedSample({1.0, 2.0})), 1.0);
  EXPECT_EQ(wstat::w2_squared_samples(OrderedSample({0.0, 2.0}), OrderedSample({2.0, 0.0})), 0.0);
  const OrderedSample s({0.3, -1.2, 4.0});
  EXPECT_EQ(wstat::w2_squared_samples(s, s), 0.0);
  EXPECT_THROW(wstat::w2_squared_samples(s, OrderedSample({1.0})), wstat::SizeMismatchError);
}

}  // namespace
