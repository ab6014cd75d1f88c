#include "asa/arbiter.hpp"

#include <string>

#include "asa/error.hpp"

namespace asa {

SlotOutcome resolve_slot(std::span<const ChannelState> channel_on,
                         std::span<const Action> actions) {
  const std::size_t n_channels = channel_on.size();
  std::vector<int> transmitters(n_channels, 0);
  for (std::size_t u = 0; u < actions.size(); ++u) {
    const Action& a = actions[u];
    if (a.kind == Action::Kind::Absent) continue;
    if (a.channel >= n_channels) {
      throw InvalidAction("user " + std::to_string(u) + " acts on channel " +
                          std::to_string(a.channel) + " of " +
                          std::to_string(n_channels));
    }
    if (a.kind == Action::Kind::Transmit) ++transmitters[a.channel];
  }

  SlotOutcome out;
  out.channel_on.assign(channel_on.begin(), channel_on.end());
  out.availability.assign(actions.size(), 0);
  out.success.assign(actions.size(), 0);
  for (std::size_t u = 0; u < actions.size(); ++u) {
    const Action& a = actions[u];
    if (a.kind == Action::Kind::Absent) continue;
    const bool self = a.kind == Action::Kind::Transmit;
    const int others = transmitters[a.channel] - (self ? 1 : 0);
    const bool available = channel_on[a.channel] == ChannelState::On && others == 0;
    out.availability[u] = available;
    if (self && available) {
      out.success[u] = 1;
      ++out.successes_total;
    }
  }
  return out;
}

}  // namespace asa
