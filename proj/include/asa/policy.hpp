#ifndef ASA_POLICY_HPP_
#define ASA_POLICY_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "asa/random.hpp"

namespace asa {

// Parameters shared by every user running the alternating sensing and access
// policy.
struct PolicyConfig {
  int L0 = 24;           // length of the first detection period
  int C = 12;            // per-period increment of the detection length
  double epsilon = 0.2;  // detector margin, must stay below r_min / 2
  double r_min = 0.5;
  Eigen::VectorXd eta;   // stationary on-fraction of every channel

  // Throws InvalidParameter when a field is out of range.
  void validate() const;
};

// Default detector margin for a given minimum rate target.
inline double default_epsilon(double r_min) { return 0.4 * r_min; }

enum class Mode { ChannelSelection, Sensing, Access };

enum class OccupancyVerdict { Unoccupied, Occupied };

struct Action {
  enum class Kind { Absent, Sense, Transmit };

  Kind kind = Kind::Absent;
  std::size_t channel = 0;

  static Action absent() { return {Kind::Absent, 0}; }
  static Action sense(std::size_t c) { return {Kind::Sense, c}; }
  static Action transmit(std::size_t c) { return {Kind::Transmit, c}; }

  bool operator==(const Action&) const = default;
};

struct UserState {
  Mode mode = Mode::ChannelSelection;
  std::size_t channel = 0;
  double r = 0.0;  // throughput target
  double q = 0.0;  // transmission probability in access, r / eta[channel]
  int k = 0;       // detection-period index
  int slots_in_period = 0;
  int La = 0;      // available slots observed in the current period
  bool entered = false;
  std::vector<std::size_t> qualified;
};

// Channels whose stationary on-fraction can carry rate r (eta_k >= r).
// Throws InfeasibleUser when there is none.
std::vector<std::size_t> qualified_channels(double r, const Eigen::VectorXd& eta);

// L0 + k * C.
int detection_length(int k, int L0, int C);

// Threshold test on the availability fraction: Unoccupied iff
// La / L >= eta_i - epsilon.  A tie counts as Unoccupied.
OccupancyVerdict occupancy_test(int La, int L, double eta_i, double epsilon);

// Fresh user with target r; not yet entered.
UserState make_user(double r, const PolicyConfig& cfg);

// Entry into the system: uniform draw over the qualified channels, then the
// first sensing period (k = 0).
void enter(UserState& user, const PolicyConfig& cfg, Rng& rng);

// What the user does in the coming slot.  In access the user transmits with
// probability q and senses otherwise.  Throws LogicError in ChannelSelection,
// which never spans a slot.
Action slot_action(const UserState& user, Rng& rng);

// Folds one availability bit into the current period's counters.
void record_outcome(UserState& user, bool available);

bool period_complete(const UserState& user, const PolicyConfig& cfg);

// Occupancy test at the end of a detection period and the resulting move:
//   sensing, unoccupied          -> access on the same channel
//   sensing, occupied, head      -> access on the same channel
//   sensing, occupied, tail      -> reselect uniformly, sensing
//   access,  unoccupied          -> access
//   access,  occupied            -> reselect uniformly, sensing
// The period counter advances and the counters reset in every case.
// Returns the verdict that drove the move.
OccupancyVerdict end_period_transition(UserState& user, const PolicyConfig& cfg,
                                       Rng& rng);

}  // namespace asa

#endif  // ASA_POLICY_HPP_
