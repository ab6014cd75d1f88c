#include "asa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "asa/error.hpp"

namespace asa {

namespace {

// Indices sorted by value descending; equal values keep index order.
std::vector<std::size_t> descending_order(const Eigen::VectorXd& v) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return v[static_cast<Eigen::Index>(a)] > v[static_cast<Eigen::Index>(b)];
  });
  return idx;
}

void check_regime(const Eigen::VectorXd& r, const Eigen::VectorXd& eta) {
  if (r.size() > eta.size()) {
    throw UnsupportedRegime("more users (" + std::to_string(r.size()) +
                            ") than channels (" + std::to_string(eta.size()) + ")");
  }
}

}  // namespace

bool in_region(const Eigen::VectorXd& r, const Eigen::VectorXd& eta) {
  check_regime(r, eta);
  const auto ro = descending_order(r);
  const auto eo = descending_order(eta);
  for (std::size_t i = 0; i < ro.size(); ++i) {
    if (r[static_cast<Eigen::Index>(ro[i])] > eta[static_cast<Eigen::Index>(eo[i])]) {
      return false;
    }
  }
  return true;
}

Allocation fixed_allocation(const Eigen::VectorXd& r, const Eigen::VectorXd& eta) {
  if (!in_region(r, eta)) {
    throw Infeasible("rate vector is outside the fixed-allocation region");
  }
  const auto ro = descending_order(r);
  const auto eo = descending_order(eta);
  Allocation alloc;
  alloc.assignment.resize(ro.size());
  for (std::size_t i = 0; i < ro.size(); ++i) alloc.assignment[ro[i]] = eo[i];
  alloc.feasible = true;
  return alloc;
}

double centralized_cumulative(const Eigen::VectorXd& r, std::span<const long> entry,
                              long t) {
  if (t < 0) throw InvalidParameter("slot index must be >= 0");
  double total = 0.0;
  for (Eigen::Index u = 0; u < r.size(); ++u) {
    const long active = std::max(0L, t - entry[static_cast<std::size_t>(u)]);
    total += r[u] * static_cast<double>(active);
  }
  return total;
}

CentralizedSimulator::CentralizedSimulator(const Eigen::VectorXd& r,
                                           const Eigen::VectorXd& eta,
                                           std::span<const long> entry,
                                           std::uint64_t seed)
    : allocation_(fixed_allocation(r, eta)), entry_(entry.begin(), entry.end()) {
  for (Eigen::Index u = 0; u < r.size(); ++u) {
    const auto c = static_cast<Eigen::Index>(allocation_.assignment[static_cast<std::size_t>(u)]);
    q_.push_back(r[u] / eta[c]);
    streams_.push_back(make_stream(seed, StreamTag::Centralized,
                                   static_cast<std::uint64_t>(u)));
  }
}

int CentralizedSimulator::step(long t, std::span<const ChannelState> channel_on) {
  int successes = 0;
  for (std::size_t u = 0; u < q_.size(); ++u) {
    if (t < entry_[u]) continue;
    std::bernoulli_distribution transmit(q_[u]);
    if (transmit(streams_[u]) &&
        channel_on[allocation_.assignment[u]] == ChannelState::On) {
      ++successes;
    }
  }
  return successes;
}

long centralized_cumulative_simulated(std::span<const ChannelParams> channels,
                                      const Eigen::VectorXd& r,
                                      std::span<const long> entry, long t,
                                      std::uint64_t seed) {
  if (t < 0) throw InvalidParameter("slot index must be >= 0");
  Eigen::VectorXd eta(static_cast<Eigen::Index>(channels.size()));
  std::vector<ChannelProcess> paths;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    eta[static_cast<Eigen::Index>(c)] = channels[c].eta();
    paths.emplace_back(channels[c], make_stream(seed, StreamTag::Channel, c));
  }
  CentralizedSimulator sim(r, eta, entry, seed);
  std::vector<ChannelState> on(channels.size());
  long total = 0;
  for (long s = 0; s < t; ++s) {
    for (std::size_t c = 0; c < paths.size(); ++c) on[c] = paths[c].next_slot();
    total += sim.step(s, on);
  }
  return total;
}

double lucky_bound(int K, std::span<const int> qualified_counts) {
  if (static_cast<std::size_t>(K) != qualified_counts.size()) {
    throw InvalidParameter("lucky_bound: need one qualified count per user");
  }
  std::vector<int> counts(qualified_counts.begin(), qualified_counts.end());
  std::sort(counts.begin(), counts.end());
  double bound = std::ldexp(1.0, -K);
  for (int k = 1; k <= K; ++k) {
    const int n = counts[static_cast<std::size_t>(k - 1)];
    if (n < k) return 0.0;
    bound *= static_cast<double>(n - k + 1) / static_cast<double>(n);
  }
  return bound;
}

}  // namespace asa
