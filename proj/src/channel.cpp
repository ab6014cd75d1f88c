#include "asa/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "asa/error.hpp"

namespace asa {

namespace {

void check_mean(double mean, const char* what) {
  if (!(mean >= 1.0) || !std::isfinite(mean)) {
    throw InvalidParameter(std::string(what) + " period mean must be >= 1, got " +
                           std::to_string(mean));
  }
}

}  // namespace

PeriodDistribution PeriodDistribution::geometric(double mean) {
  return {Kind::Geometric, mean};
}

PeriodDistribution PeriodDistribution::deterministic(double mean) {
  return {Kind::Deterministic, mean};
}

double stationary_fraction(double on_mean, double off_mean) {
  if (!(on_mean > 0.0) || !(off_mean > 0.0)) {
    throw InvalidParameter("stationary_fraction: means must be positive");
  }
  return on_mean / (on_mean + off_mean);
}

long sample_period(const PeriodDistribution& dist, Rng& rng) {
  switch (dist.kind) {
    case PeriodDistribution::Kind::Deterministic:
      return std::max(1L, std::lround(dist.mean));
    case PeriodDistribution::Kind::Geometric: {
      if (dist.mean <= 1.0) return 1;
      // std::geometric_distribution counts failures before the first success.
      std::geometric_distribution<long> failures(1.0 / dist.mean);
      return failures(rng) + 1;
    }
  }
  return 1;
}

ChannelParams::ChannelParams(PeriodDistribution on, PeriodDistribution off)
    : on_(on), off_(off) {
  check_mean(on_.mean, "on");
  check_mean(off_.mean, "off");
  eta_ = stationary_fraction(on_.mean, off_.mean);
}

ChannelParams ChannelParams::geometric(double on_mean, double off_mean) {
  return ChannelParams(PeriodDistribution::geometric(on_mean),
                       PeriodDistribution::geometric(off_mean));
}

ChannelProcess::ChannelProcess(const ChannelParams& params, Rng rng, StartRule)
    : params_(params), rng_(std::move(rng)) {
  std::bernoulli_distribution starts_on(params_.eta());
  state_ = starts_on(rng_) ? ChannelState::On : ChannelState::Off;
  remaining_ = sample_period(dist_of(state_), rng_);
}

ChannelProcess::ChannelProcess(const ChannelParams& params, Rng rng,
                               ChannelState initial)
    : params_(params), rng_(std::move(rng)), state_(initial) {
  remaining_ = sample_period(dist_of(state_), rng_);
}

ChannelState ChannelProcess::next_slot() {
  if (remaining_ == 0) {
    state_ = opposite(state_);
    remaining_ = sample_period(dist_of(state_), rng_);
  }
  --remaining_;
  return state_;
}

ChannelProcess init_channel(const ChannelParams& params, std::uint64_t seed,
                            StartRule rule) {
  return ChannelProcess(params, make_stream(seed, StreamTag::Channel, 0), rule);
}

}  // namespace asa
