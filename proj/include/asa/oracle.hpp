#ifndef ASA_ORACLE_HPP_
#define ASA_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "asa/channel.hpp"
#include "asa/random.hpp"

namespace asa {

// Fixed user -> channel map of the centralized baseline.
struct Allocation {
  std::vector<std::size_t> assignment;  // assignment[u] is user u's channel
  bool feasible = false;
};

enum class BaselineMode { Analytic, Simulated };

// Membership of the rate vector in the fixed-allocation throughput region:
// with r and eta both sorted descending, r_(i) <= eta_(i) for every i <= K.
// Throws UnsupportedRegime when K > N.
bool in_region(const Eigen::VectorXd& r, const Eigen::VectorXd& eta);

// Pairs the i-th largest rate with the i-th largest channel (ties by index).
// Throws Infeasible when the rate vector is outside the region.
Allocation fixed_allocation(const Eigen::VectorXd& r, const Eigen::VectorXd& eta);

// Expected centralized success count over slots [0, t): sum_u r_u (t - entry_u)^+.
// Each assigned user transmits with probability r_u / eta on its own channel,
// so it succeeds with probability r_u per slot.  Throws InvalidParameter for
// t < 0.
double centralized_cumulative(const Eigen::VectorXd& r, std::span<const long> entry,
                              long t);

// Centralized users replayed on given channel realizations.  Each user
// transmits on its assigned channel with probability r_u / eta from its own
// stream and succeeds iff the channel is on.
class CentralizedSimulator {
 public:
  CentralizedSimulator(const Eigen::VectorXd& r, const Eigen::VectorXd& eta,
                       std::span<const long> entry, std::uint64_t seed);

  // Successes in slot t given the channel states of that slot.
  int step(long t, std::span<const ChannelState> channel_on);

  const Allocation& allocation() const { return allocation_; }

 private:
  Allocation allocation_;
  std::vector<double> q_;
  std::vector<long> entry_;
  std::vector<Rng> streams_;
};

// Realized centralized success count over slots [0, t) on freshly sampled
// channel paths, the Monte Carlo counterpart of centralized_cumulative.
long centralized_cumulative_simulated(std::span<const ChannelParams> channels,
                                      const Eigen::VectorXd& r,
                                      std::span<const long> entry, long t,
                                      std::uint64_t seed);

// Lower bound on the probability that one round of coin flips and uniform
// channel draws separates K users:
//   2^-K * prod_{k=1..K} (N_k - k + 1) / N_k,
// with N_k the qualified-channel counts in ascending order.  Zero when some
// N_k < k.
double lucky_bound(int K, std::span<const int> qualified_counts);

}  // namespace asa

#endif  // ASA_ORACLE_HPP_
