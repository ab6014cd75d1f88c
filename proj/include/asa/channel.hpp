#ifndef ASA_CHANNEL_HPP_
#define ASA_CHANNEL_HPP_

#include <cstdint>

#include "asa/random.hpp"

namespace asa {

enum class ChannelState : std::uint8_t { Off = 0, On = 1 };

inline ChannelState opposite(ChannelState s) {
  return s == ChannelState::On ? ChannelState::Off : ChannelState::On;
}

// Law of the length (in slots) of one on or off period.
struct PeriodDistribution {
  enum class Kind { Geometric, Deterministic };

  Kind kind = Kind::Geometric;
  double mean = 1.0;

  static PeriodDistribution geometric(double mean);
  static PeriodDistribution deterministic(double mean);
};

// Long-run fraction of on slots of an alternating renewal channel,
// on_mean / (on_mean + off_mean).  Throws InvalidParameter for a non-positive
// mean.
double stationary_fraction(double on_mean, double off_mean);

// Draws one period length.  Geometric(mean) lives on {1, 2, ...} with success
// probability 1/mean; Deterministic(mean) is round(mean), at least 1.
long sample_period(const PeriodDistribution& dist, Rng& rng);

class ChannelParams {
 public:
  // Both means must be >= 1.
  ChannelParams(PeriodDistribution on, PeriodDistribution off);

  static ChannelParams geometric(double on_mean, double off_mean);

  const PeriodDistribution& on() const { return on_; }
  const PeriodDistribution& off() const { return off_; }
  double eta() const { return eta_; }

 private:
  PeriodDistribution on_;
  PeriodDistribution off_;
  double eta_;
};

enum class StartRule { StationaryBernoulli };

// One channel's on/off sample path.  Owns its random stream, so distinct
// processes can be advanced on different threads.
class ChannelProcess {
 public:
  // Initial state On with probability eta, followed by a fresh full period of
  // that state.
  ChannelProcess(const ChannelParams& params, Rng rng,
                 StartRule rule = StartRule::StationaryBernoulli);

  // Forced initial state; a full period of it is sampled.
  ChannelProcess(const ChannelParams& params, Rng rng, ChannelState initial);

  // State of the next slot.
  ChannelState next_slot();

  const ChannelParams& params() const { return params_; }
  ChannelState current_state() const { return state_; }
  long remaining() const { return remaining_; }

 private:
  const PeriodDistribution& dist_of(ChannelState s) const {
    return s == ChannelState::On ? params_.on() : params_.off();
  }

  ChannelParams params_;
  Rng rng_;
  ChannelState state_;
  long remaining_;
};

ChannelProcess init_channel(const ChannelParams& params, std::uint64_t seed,
                            StartRule rule = StartRule::StationaryBernoulli);

}  // namespace asa

#endif  // ASA_CHANNEL_HPP_
