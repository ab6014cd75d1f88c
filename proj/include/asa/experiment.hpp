#ifndef ASA_EXPERIMENT_HPP_
#define ASA_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "asa/channel.hpp"
#include "asa/oracle.hpp"
#include "asa/policy.hpp"

namespace asa {

struct UserSpec {
  double rate = 0.5;
  long entry = 0;  // first slot in which the user acts
};

struct ExperimentConfig {
  std::vector<ChannelParams> channels;
  std::vector<UserSpec> users;
  int L0 = 24;
  int C = 12;
  double epsilon = 0.2;
  long horizon = 5000;
  int runs = 20;
  std::uint64_t seed = 1;
  BaselineMode baseline = BaselineMode::Analytic;

  Eigen::VectorXd eta() const;
  Eigen::VectorXd rates() const;
  std::vector<long> entries() const;
  double r_min() const;
  PolicyConfig policy() const;

  // True when every user enters at slot 0, so all detection periods align.
  bool synchronized() const;

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Outcome of one simulated replication, slot by slot.
struct RunTrace {
  std::vector<std::uint16_t> successes;    // distributed successes per slot
  std::vector<std::uint16_t> centralized;  // Simulated baseline only
  std::vector<std::uint8_t> good;          // all users in access on distinct channels
  std::vector<std::uint16_t> on_channels;  // channels in the on state
  std::vector<long> user_successes;
  std::vector<long> user_successes_final_half;
};

// Slots counted by user_successes_final_half: the last horizon/2 slots.
inline long final_half_length(long horizon) { return horizon / 2; }

RunTrace run_once(const ExperimentConfig& cfg, std::uint64_t run_seed);

// All replications of cfg, run r seeded with derive_run_seed(cfg.seed, r).
// threads <= 0 uses the hardware concurrency; the result does not depend on it.
std::vector<RunTrace> simulate_runs(const ExperimentConfig& cfg, int threads = 0);

// Per-slot Monte Carlo averages.  Entry n (0-based) covers the first n + 1
// slots.  regret_mean is centralized_cum - asa_cum_mean exactly.
struct RegretTrace {
  Eigen::ArrayXd centralized_cum;
  Eigen::ArrayXd asa_cum_mean;
  Eigen::ArrayXd regret_mean;
  Eigen::ArrayXd regret_stderr;
  Eigen::ArrayXd good_frac;
  Eigen::VectorXd user_rate_final_half;
  Eigen::VectorXd user_rate_final_half_stderr;
  int runs = 0;
};

RegretTrace aggregate(const ExperimentConfig& cfg, std::span<const RunTrace> runs);
RegretTrace monte_carlo(const ExperimentConfig& cfg, int threads = 0);

// Detection period i (1-based) of the common schedule, L_i = L0 + (i-1) C,
// ending after end_slot elapsed slots.  Only periods completed within the
// horizon are listed.
struct PeriodSpan {
  int index = 0;
  int length = 0;
  long end_slot = 0;
};

std::vector<PeriodSpan> period_schedule(int L0, int C, long horizon);

struct PeriodEstimate {
  PeriodSpan period;
  double p_err = 0.0;  // fraction of runs not in good configuration
};

// Per-period probability of a bad configuration, read at each period's last
// slot.  Throws InvalidParameter unless every user enters at slot 0.
std::vector<PeriodEstimate> estimate_Pie(const ExperimentConfig& cfg,
                                         std::span<const RunTrace> runs);
std::vector<PeriodEstimate> estimate_Pie(const ExperimentConfig& cfg, int threads = 0);

struct BoundRow {
  PeriodSpan period;
  double p_err = 0.0;
  double regret_mean = 0.0;
  double regret_stderr = 0.0;
  double rhs = 0.0;  // sum_{i<=n} N L_i p_err_i
  double rhs_stderr = 0.0;
  double margin = 0.0;  // rhs + 3 * combined stderr - regret_mean
  bool holds = true;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  bool holds = true;
  std::optional<int> first_violation;  // period index
};

// Empirical check of E R_n <= sum_{i<=n} N L_i P_{i,e} at every period end,
// with a three standard error allowance.
BoundReport bound_check(const ExperimentConfig& cfg, std::span<const RunTrace> runs);
BoundReport bound_check(const ExperimentConfig& cfg, int threads = 0);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Least squares of log(y) on x over the strictly positive y.  Throws
// InsufficientData with fewer than three such points.
DecayFit decay_fit(std::span<const double> x, std::span<const double> y);
// Same with x = 1, 2, ..., n.
DecayFit decay_fit(std::span<const double> y);

struct DetectorPoint {
  int L = 0;
  long trials = 0;
  long false_alarms = 0;
  long misses = 0;
  double fa = 0.0;
  double md = 0.0;
  double h0_mean = 0.0;  // mean La / L with the channel unoccupied
  double h1_mean = 0.0;  // mean La / L with an occupant transmitting
};

struct DetectorCurve {
  std::vector<DetectorPoint> points;
  std::optional<DecayFit> fa_fit;  // empty when fewer than three nonzero rates
  std::optional<DecayFit> md_fit;
};

// Monte Carlo false alarm and miss detection rates of the occupancy test for
// each period length.  Under H0 a lone sensor watches a stationary channel;
// under H1 an occupant transmits with probability r_occupant / eta.
// Throws InvalidParameter when trials < 1000.
DetectorCurve detector_error_curve(const ChannelParams& channel, double r_occupant,
                                   double epsilon, std::span<const int> L_list,
                                   long trials, std::uint64_t seed, int threads = 0);

// Two-sided Clopper-Pearson interval for a binomial proportion.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval binomial_interval(long successes, long trials, double confidence = 0.95);

int resolve_threads(int requested);

}  // namespace asa

#endif  // ASA_EXPERIMENT_HPP_
