#include "asa/policy.hpp"

#include <random>
#include <string>

#include "asa/error.hpp"

namespace asa {

namespace {

void select_channel(UserState& user, const PolicyConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, user.qualified.size() - 1);
  user.channel = user.qualified[pick(rng)];
  user.q = user.r / cfg.eta[static_cast<Eigen::Index>(user.channel)];
  user.mode = Mode::Sensing;
}

}  // namespace

void PolicyConfig::validate() const {
  if (L0 < 1) throw InvalidParameter("policy.L0 must be >= 1");
  if (C < 0) throw InvalidParameter("policy.C must be >= 0");
  if (!(epsilon > 0.0)) throw InvalidParameter("policy.epsilon must be > 0");
  if (!(r_min > 0.0 && r_min < 1.0)) {
    throw InvalidParameter("r_min must lie in (0, 1)");
  }
  if (!(epsilon < r_min / 2.0)) {
    throw InvalidParameter("epsilon must be < r_min/2 (epsilon=" +
                           std::to_string(epsilon) +
                           ", r_min/2=" + std::to_string(r_min / 2.0) + ")");
  }
  if (eta.size() == 0) throw InvalidParameter("at least one channel is required");
}

std::vector<std::size_t> qualified_channels(double r, const Eigen::VectorXd& eta) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (eta[i] >= r) out.push_back(static_cast<std::size_t>(i));
  }
  if (out.empty()) {
    throw InfeasibleUser("no channel can carry rate " + std::to_string(r));
  }
  return out;
}

int detection_length(int k, int L0, int C) { return L0 + k * C; }

OccupancyVerdict occupancy_test(int La, int L, double eta_i, double epsilon) {
  const double fraction = static_cast<double>(La) / static_cast<double>(L);
  return fraction >= eta_i - epsilon ? OccupancyVerdict::Unoccupied
                                     : OccupancyVerdict::Occupied;
}

UserState make_user(double r, const PolicyConfig& cfg) {
  if (!(r > 0.0 && r < 1.0)) {
    throw InvalidParameter("user rate must lie in (0, 1), got " + std::to_string(r));
  }
  UserState user;
  user.r = r;
  user.qualified = qualified_channels(r, cfg.eta);
  return user;
}

void enter(UserState& user, const PolicyConfig& cfg, Rng& rng) {
  user.entered = true;
  user.k = 0;
  user.La = 0;
  user.slots_in_period = 0;
  select_channel(user, cfg, rng);
}

Action slot_action(const UserState& user, Rng& rng) {
  if (!user.entered) return Action::absent();
  switch (user.mode) {
    case Mode::Sensing:
      return Action::sense(user.channel);
    case Mode::Access: {
      std::bernoulli_distribution transmit(user.q);
      return transmit(rng) ? Action::transmit(user.channel)
                           : Action::sense(user.channel);
    }
    case Mode::ChannelSelection:
      break;
  }
  throw LogicError("slot_action called in channel selection");
}

void record_outcome(UserState& user, bool available) {
  if (available) ++user.La;
  ++user.slots_in_period;
}

bool period_complete(const UserState& user, const PolicyConfig& cfg) {
  return user.slots_in_period == detection_length(user.k, cfg.L0, cfg.C);
}

OccupancyVerdict end_period_transition(UserState& user, const PolicyConfig& cfg,
                                       Rng& rng) {
  const int L = detection_length(user.k, cfg.L0, cfg.C);
  if (user.slots_in_period != L) {
    throw LogicError("end_period_transition before the period is complete");
  }
  const double eta = cfg.eta[static_cast<Eigen::Index>(user.channel)];
  const OccupancyVerdict verdict = occupancy_test(user.La, L, eta, cfg.epsilon);

  if (verdict == OccupancyVerdict::Occupied) {
    bool reselect = true;
    if (user.mode == Mode::Sensing) {
      std::bernoulli_distribution head(0.5);
      reselect = !head(rng);
    }
    if (reselect) {
      user.mode = Mode::ChannelSelection;
      select_channel(user, cfg, rng);
    } else {
      user.mode = Mode::Access;
    }
  } else {
    user.mode = Mode::Access;
  }

  ++user.k;
  user.La = 0;
  user.slots_in_period = 0;
  return verdict;
}

}  // namespace asa
