#ifndef ASA_ARBITER_HPP_
#define ASA_ARBITER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "asa/channel.hpp"
#include "asa/policy.hpp"

namespace asa {

// Result of one slot.  availability is meaningful for users that sensed or
// transmitted; success only for transmitters.  Both are the only thing a user
// ever sees: the bit never says whether a failure came from an off channel or a
// collision.
struct SlotOutcome {
  std::vector<ChannelState> channel_on;
  std::vector<std::uint8_t> availability;
  std::vector<std::uint8_t> success;
  int successes_total = 0;
};

// A user acting on channel c finds it available iff c is on and no other user
// transmits on c.  A transmitter succeeds iff its channel is available to it;
// a sensor observes the same counterfactual bit.  Sensing never interferes.
// Throws InvalidAction for an out-of-range channel.
SlotOutcome resolve_slot(std::span<const ChannelState> channel_on,
                         std::span<const Action> actions);

}  // namespace asa

#endif  // ASA_ARBITER_HPP_
