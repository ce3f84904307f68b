#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "wstat/quadrature.hpp"

namespace {

using wstat::quadrature::integrate;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 3.75 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, GaussianMassOverWholeLine) {
  const auto r = integrate([](double x) { return std::exp(-0.5 * x * x); }, -kInf, kInf);
  EXPECT_NEAR(r.value, std::sqrt(2.0 * oracle::kPi), 1e-12);
}

TEST(Quadrature, HalfInfiniteRangesMatchBoost) {
  auto g = [](double x) { return std::exp(-std::abs(x)) * std::cos(x); };
  EXPECT_NEAR(integrate(g, 0.5, kInf).value, oracle::integrate_tanh_sinh(g, 0.5, kInf), 1e-12);
  EXPECT_NEAR(integrate(g, -kInf, -0.25).value, oracle::integrate_tanh_sinh(g, -kInf, -0.25),
              1e-12);
}

TEST(Quadrature, KinkedIntegrandMatchesAntiderivative) {
  auto g = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
  const double exact = 2.0 / 3.0 * (std::pow(0.3, 1.5) + std::pow(0.7, 1.5));
  EXPECT_NEAR(integrate(g, 0.0, 1.0).value, exact, 1e-10);
}

TEST(Quadrature, ReversedAndEmptyRanges) {
  auto g = [](double x) { return x; };
  EXPECT_NEAR(integrate(g, 1.0, 0.0).value, -0.5, 1e-15);
  EXPECT_EQ(integrate(g, 2.0, 2.0).value, 0.0);
}

}  // namespace
