#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asa/error.hpp"
#include "asa/experiment.hpp"

namespace asa {
namespace {

TEST(DecayFit, ExactGeometricSeries) {
  std::vector<double> y;
  for (int i = 1; i <= 10; ++i) y.push_back(std::pow(2.0, -i));
  const DecayFit fit = decay_fit(y);
  EXPECT_NEAR(fit.slope, -std::log(2.0), 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.points, 10);
}

TEST(DecayFit, ConstantSeriesHasZeroSlopeAndZeroR2) {
  const std::vector<double> y(8, 0.3);
  const DecayFit fit = decay_fit(y);
  EXPECT_NEAR(fit.slope, 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(fit.r_squared, 0.0);
  EXPECT_FALSE(std::isnan(fit.r_squared));
}

TEST(DecayFit, ZeroEntriesAreExcluded) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{std::exp(-1.0), 0.0, std::exp(-3.0), std::exp(-4.0), std::exp(-5.0)};
  const DecayFit fit = decay_fit(x, y);
  EXPECT_EQ(fit.points, 4);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(DecayFit, NeedsThreePositivePoints) {
  const std::vector<double> y{0.5, 0.0, 0.25, 0.0};
  EXPECT_THROW(decay_fit(y), InsufficientData);
}

TEST(BinomialInterval, ContainsEstimateAndHandlesEdges) {
  const Interval mid = binomial_interval(50, 100);
  EXPECT_LT(mid.lo, 0.5);
  EXPECT_GT(mid.hi, 0.5);
  // Clopper-Pearson 95% for 50/100 is about [0.398, 0.602].
  EXPECT_NEAR(mid.lo, 0.3983, 1e-3);
  EXPECT_NEAR(mid.hi, 0.6017, 1e-3);
  const Interval none = binomial_interval(0, 10000);
  EXPECT_DOUBLE_EQ(none.lo, 0.0);
  // Rule of three: upper bound near 3.69 / n.
  EXPECT_NEAR(none.hi, 3.69e-4, 1e-5);
  const Interval all = binomial_interval(10, 10);
  EXPECT_DOUBLE_EQ(all.hi, 1.0);
}

}  // namespace
}  // namespace asa
