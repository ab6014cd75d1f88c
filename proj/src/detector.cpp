#include <cmath>
#include <random>
#include <string>

#include "asa/error.hpp"
#include "asa/experiment.hpp"
#include "asa/random.hpp"
#include "parallel.hpp"

namespace asa {

namespace {

// Available slots seen by a sensor during one detection period on a freshly
// started channel.  With an occupant stream, a single occupant transmits with
// probability q per slot.
int observe_period(const ChannelParams& channel, int L, double q, Rng& channel_rng,
                   Rng* occupant_rng) {
  ChannelProcess process(channel, Rng(channel_rng()));
  std::bernoulli_distribution transmit(q);
  int available = 0;
  for (int s = 0; s < L; ++s) {
    const bool on = process.next_slot() == ChannelState::On;
    const bool busy = occupant_rng != nullptr && transmit(*occupant_rng);
    if (on && !busy) ++available;
  }
  return available;
}

}  // namespace

DetectorCurve detector_error_curve(const ChannelParams& channel, double r_occupant,
                                   double epsilon, std::span<const int> L_list,
                                   long trials, std::uint64_t seed, int threads) {
  if (trials < 1000) throw InvalidParameter("detector curve needs >= 1000 trials per L");
  const double eta = channel.eta();
  if (!(r_occupant > 0.0 && r_occupant <= eta)) {
    throw InvalidParameter("occupant rate must lie in (0, eta]");
  }
  if (!(epsilon > 0.0 && epsilon < eta)) {
    throw InvalidParameter("epsilon must lie in (0, eta)");
  }
  const double q = r_occupant / eta;

  DetectorCurve curve;
  curve.points.resize(L_list.size());
  detail::parallel_for(L_list.size(), resolve_threads(threads), [&](std::size_t i) {
    const int L = L_list[i];
    if (L < 1) throw InvalidParameter("detection length must be >= 1");
    const std::uint64_t base = 3 * static_cast<std::uint64_t>(i);
    Rng h0_channel = make_stream(seed, StreamTag::Detector, base);
    Rng h1_channel = make_stream(seed, StreamTag::Detector, base + 1);
    Rng h1_occupant = make_stream(seed, StreamTag::Detector, base + 2);

    DetectorPoint p;
    p.L = L;
    p.trials = trials;
    double h0_sum = 0.0;
    double h1_sum = 0.0;
    for (long t = 0; t < trials; ++t) {
      const int la0 = observe_period(channel, L, 0.0, h0_channel, nullptr);
      const int la1 = observe_period(channel, L, q, h1_channel, &h1_occupant);
      h0_sum += static_cast<double>(la0) / L;
      h1_sum += static_cast<double>(la1) / L;
      if (occupancy_test(la0, L, eta, epsilon) == OccupancyVerdict::Occupied) {
        ++p.false_alarms;
      }
      if (occupancy_test(la1, L, eta, epsilon) == OccupancyVerdict::Unoccupied) {
        ++p.misses;
      }
    }
    const auto n = static_cast<double>(trials);
    p.fa = static_cast<double>(p.false_alarms) / n;
    p.md = static_cast<double>(p.misses) / n;
    p.h0_mean = h0_sum / n;
    p.h1_mean = h1_sum / n;
    curve.points[i] = p;
  });

  std::vector<double> Ls;
  std::vector<double> fa;
  std::vector<double> md;
  for (const auto& p : curve.points) {
    Ls.push_back(p.L);
    fa.push_back(p.fa);
    md.push_back(p.md);
  }
  try {
    curve.fa_fit = decay_fit(Ls, fa);
  } catch (const InsufficientData&) {
  }
  try {
    curve.md_fit = decay_fit(Ls, md);
  } catch (const InsufficientData&) {
  }
  return curve;
}

}  // namespace asa
