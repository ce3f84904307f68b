#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "wstat/optimize.hpp"

namespace {

using namespace wstat::optimize;

TEST(NelderMead, FindsRosenbrockMinimum) {
  auto f = [](std::span<const double> x) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  SimplexOptions opt;
  opt.tolerance = 1e-10;
  const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(NelderMead, TreatsInfeasibleAsInfinite) {
  // Minimum of (x - 2)^2 constrained to x <= 1 sits at the boundary.
  auto f = [](std::span<const double> x) {
    if (x[0] > 1.0) return std::numeric_limits<double>::infinity();
    return (x[0] - 2.0) * (x[0] - 2.0);
  };
  const auto r = nelder_mead(f, {0.0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
}

TEST(NelderMead, ReportsIterationCap) {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  SimplexOptions opt;
  opt.max_iterations = 3;
  const auto r = nelder_mead(f, {5.0, 5.0}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 3u);
}

TEST(Broyden, SolvesSmoothSystem) {
  auto r = [](std::span<const double> x) {
    return std::vector<double>{x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]};
  };
  const auto res = broyden(r, {1.0, 0.5});
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(res.x[1], std::sqrt(2.0), 1e-8);
}

}  // namespace
