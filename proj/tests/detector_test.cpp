#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asa/error.hpp"
#include "asa/experiment.hpp"

namespace asa {
namespace {

// Exact law of La over L slots for a geometric on/off channel started in
// stationarity.  Geometric periods on {1, 2, ...} make the slot states a
// two-state Markov chain that leaves On with probability 1/on_mean and Off
// with probability 1/off_mean.  An optional occupant blocks each on slot
// independently with probability q.
std::vector<double> exact_available_law(double on_mean, double off_mean, int L, double q) {
  const double eta = on_mean / (on_mean + off_mean);
  const double stay_on = 1.0 - 1.0 / on_mean;
  const double stay_off = 1.0 - 1.0 / off_mean;
  std::vector<double> on(L + 1, 0.0), off(L + 1, 0.0);
  on[1] = eta * (1 - q);
  on[0] = eta * q;
  off[0] = 1 - eta;
  for (int s = 1; s < L; ++s) {
    std::vector<double> non(L + 1, 0.0), noff(L + 1, 0.0);
    for (int a = 0; a <= s; ++a) {
      const double to_on = on[a] * stay_on + off[a] * (1 - stay_off);
      const double to_off = on[a] * (1 - stay_on) + off[a] * stay_off;
      non[a + 1] += to_on * (1 - q);
      non[a] += to_on * q;
      noff[a] += to_off;
    }
    on.swap(non);
    off.swap(noff);
  }
  std::vector<double> law(L + 1);
  for (int a = 0; a <= L; ++a) law[a] = on[a] + off[a];
  return law;
}

double exact_false_alarm(int L, double eps) {
  const double eta = 3.23 / (3.23 + 1.43);
  const auto law = exact_available_law(3.23, 1.43, L, 0.0);
  double p = 0.0;
  for (int a = 0; a <= L; ++a) {
    if (static_cast<double>(a) / L < eta - eps) p += law[a];
  }
  return p;
}

double exact_miss(int L, double r, double eps) {
  const double eta = 3.23 / (3.23 + 1.43);
  const auto law = exact_available_law(3.23, 1.43, L, r / eta);
  double p = 0.0;
  for (int a = 0; a <= L; ++a) {
    if (static_cast<double>(a) / L >= eta - eps) p += law[a];
  }
  return p;
}

TEST(ExactOracle, FrozenValues) {
  // Values the Monte Carlo tests below are checked against.
  EXPECT_NEAR(exact_false_alarm(24, 0.2), 0.0133235, 1e-6);
  EXPECT_NEAR(exact_false_alarm(12, 0.2), 0.0420428, 1e-6);
  EXPECT_NEAR(exact_miss(12, 0.5, 0.2), 0.0163070, 1e-6);
}

TEST(DetectorCurve, MatchesExactErrorRates) {
  const auto channel = ChannelParams::geometric(3.23, 1.43);
  const std::vector<int> Ls{12, 24};
  const long trials = 100'000;
  const DetectorCurve curve = detector_error_curve(channel, 0.5, 0.2, Ls, trials, 3, 2);
  ASSERT_EQ(curve.points.size(), 2u);
  for (const auto& p : curve.points) {
    const double fa = exact_false_alarm(p.L, 0.2);
    const double md = exact_miss(p.L, 0.5, 0.2);
    EXPECT_NEAR(p.fa, fa, 4 * std::sqrt(fa * (1 - fa) / trials)) << "L=" << p.L;
    EXPECT_NEAR(p.md, md, 4 * std::sqrt(md * (1 - md) / trials) + 1e-5) << "L=" << p.L;
  }
}

TEST(DetectorCurve, StatisticMeansUnderBothHypotheses) {
  const auto channel = ChannelParams::geometric(3.23, 1.43);
  const std::vector<int> Ls{24, 60};
  const DetectorCurve curve = detector_error_curve(channel, 0.5, 0.2, Ls, 5000, 4);
  for (const auto& p : curve.points) {
    EXPECT_NEAR(p.h0_mean, channel.eta(), 0.02);
    EXPECT_NEAR(p.h1_mean, channel.eta() - 0.5, 0.02);
  }
}

TEST(DetectorCurve, FalseAlarmFallsWithLength) {
  const auto channel = ChannelParams::geometric(3.23, 1.43);
  const std::vector<int> Ls{24, 120};
  const DetectorCurve curve = detector_error_curve(channel, 0.5, 0.2, Ls, 10000, 5);
  const Interval short_ci = binomial_interval(curve.points[0].false_alarms, 10000);
  const Interval long_ci = binomial_interval(curve.points[1].false_alarms, 10000);
  EXPECT_LT(long_ci.hi, short_ci.lo);
}

TEST(DetectorCurve, PersistentOccupantIsNeverMissed) {
  // q = r / eta = 1: every slot is blocked, so La = 0.
  const ChannelParams channel(PeriodDistribution::deterministic(1e6),
                              PeriodDistribution::deterministic(1));
  const std::vector<int> Ls{12, 24, 48};
  const DetectorCurve curve =
      detector_error_curve(channel, channel.eta(), 0.5, Ls, 1000, 6);
  for (const auto& p : curve.points) {
    EXPECT_EQ(p.misses, 0);
    EXPECT_DOUBLE_EQ(p.h1_mean, 0.0);
  }
  EXPECT_FALSE(curve.md_fit.has_value());
}

TEST(DetectorCurve, RejectsTooFewTrials) {
  const auto channel = ChannelParams::geometric(3.23, 1.43);
  const std::vector<int> Ls{12};
  EXPECT_THROW(detector_error_curve(channel, 0.5, 0.2, Ls, 999, 1), InvalidParameter);
}

TEST(DetectorCurve, IndependentOfThreadCount) {
  const auto channel = ChannelParams::geometric(3.23, 4.3);
  const std::vector<int> Ls{12, 24, 36, 48};
  const auto a = detector_error_curve(channel, 0.4, 0.16, Ls, 2000, 8, 1);
  const auto b = detector_error_curve(channel, 0.4, 0.16, Ls, 2000, 8, 4);
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    EXPECT_EQ(a.points[i].false_alarms, b.points[i].false_alarms);
    EXPECT_EQ(a.points[i].misses, b.points[i].misses);
    EXPECT_EQ(a.points[i].h0_mean, b.points[i].h0_mean);
  }
}

}  // namespace
}  // namespace asa
