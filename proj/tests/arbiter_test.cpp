#include <vector>

#include <gtest/gtest.h>

#include "asa/arbiter.hpp"
#include "asa/error.hpp"

namespace asa {
namespace {

constexpr ChannelState On = ChannelState::On;
constexpr ChannelState Off = ChannelState::Off;

TEST(ResolveSlot, CollisionFailsBoth) {
  const std::vector<ChannelState> on{On};
  const std::vector<Action> actions{Action::transmit(0), Action::transmit(0)};
  const auto out = resolve_slot(on, actions);
  EXPECT_EQ(out.success, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(out.availability, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(out.successes_total, 0);
}

TEST(ResolveSlot, OffChannelFailsLoneTransmitter) {
  const std::vector<ChannelState> on{Off};
  const std::vector<Action> actions{Action::transmit(0)};
  const auto out = resolve_slot(on, actions);
  EXPECT_EQ(out.success[0], 0);
  EXPECT_EQ(out.successes_total, 0);
}

TEST(ResolveSlot, SensorSeesCounterfactualCollision) {
  const std::vector<ChannelState> on{On};
  const std::vector<Action> actions{Action::transmit(0), Action::sense(0)};
  const auto out = resolve_slot(on, actions);
  EXPECT_EQ(out.success[0], 1);
  EXPECT_EQ(out.availability[0], 1);
  EXPECT_EQ(out.availability[1], 0);
  EXPECT_EQ(out.success[1], 0);
  EXPECT_EQ(out.successes_total, 1);
}

TEST(ResolveSlot, SensorsDoNotInterfere) {
  const std::vector<ChannelState> on{On, Off};
  const std::vector<Action> actions{Action::sense(0), Action::sense(0), Action::sense(1)};
  const auto out = resolve_slot(on, actions);
  EXPECT_EQ(out.availability, (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(out.successes_total, 0);
}

TEST(ResolveSlot, AbsentUsersReceiveNothing) {
  const std::vector<ChannelState> on{On};
  const std::vector<Action> actions{Action::absent(), Action::transmit(0)};
  const auto out = resolve_slot(on, actions);
  EXPECT_EQ(out.availability[0], 0);
  EXPECT_EQ(out.success[0], 0);
  EXPECT_EQ(out.success[1], 1);
}

TEST(ResolveSlot, RejectsOutOfRangeChannel) {
  const std::vector<ChannelState> on{On, On};
  const std::vector<Action> actions{Action::sense(2)};
  EXPECT_THROW(resolve_slot(on, actions), InvalidAction);
}

// Every action profile of up to 3 users over up to 2 channels in every channel
// state combination.
template <typename Fn>
void for_each_profile(Fn&& fn) {
  for (std::size_t n_ch = 1; n_ch <= 2; ++n_ch) {
    const std::size_t n_actions = 1 + 2 * n_ch;  // absent, sense(c), transmit(c)
    for (std::size_t k = 1; k <= 3; ++k) {
      std::size_t profiles = 1;
      for (std::size_t i = 0; i < k; ++i) profiles *= n_actions;
      for (unsigned states = 0; states < (1u << n_ch); ++states) {
        std::vector<ChannelState> on(n_ch);
        for (std::size_t c = 0; c < n_ch; ++c) on[c] = (states >> c) & 1 ? On : Off;
        for (std::size_t p = 0; p < profiles; ++p) {
          std::vector<Action> actions(k);
          std::size_t code = p;
          for (std::size_t u = 0; u < k; ++u) {
            const std::size_t a = code % n_actions;
            code /= n_actions;
            if (a == 0) {
              actions[u] = Action::absent();
            } else if (a <= n_ch) {
              actions[u] = Action::sense(a - 1);
            } else {
              actions[u] = Action::transmit(a - 1 - n_ch);
            }
          }
          fn(on, actions);
        }
      }
    }
  }
}

TEST(ResolveSlot, SensingBitEqualsCounterfactualTransmitFeedback) {
  int checked = 0;
  for_each_profile([&](const std::vector<ChannelState>& on, const std::vector<Action>& actions) {
    const auto out = resolve_slot(on, actions);
    for (std::size_t u = 0; u < actions.size(); ++u) {
      if (actions[u].kind != Action::Kind::Sense) continue;
      auto alt = actions;
      alt[u] = Action::transmit(actions[u].channel);
      const auto cf = resolve_slot(on, alt);
      EXPECT_EQ(out.availability[u], cf.success[u]);
      ++checked;
    }
  });
  EXPECT_GT(checked, 0);
}

TEST(ResolveSlot, MatchesDirectCountingOracle) {
  for_each_profile([&](const std::vector<ChannelState>& on, const std::vector<Action>& actions) {
    const auto out = resolve_slot(on, actions);
    int expected_total = 0;
    std::vector<int> per_channel(on.size(), 0);
    for (std::size_t c = 0; c < on.size(); ++c) {
      int tx = 0;
      for (const auto& a : actions) tx += a.kind == Action::Kind::Transmit && a.channel == c;
      if (on[c] == On && tx == 1) ++expected_total;
    }
    EXPECT_EQ(out.successes_total, expected_total);
    for (std::size_t u = 0; u < actions.size(); ++u) {
      if (actions[u].kind == Action::Kind::Absent) continue;
      int others = 0;
      for (std::size_t v = 0; v < actions.size(); ++v) {
        others += v != u && actions[v].kind == Action::Kind::Transmit &&
                  actions[v].channel == actions[u].channel;
      }
      const bool avail = on[actions[u].channel] == On && others == 0;
      EXPECT_EQ(out.availability[u] != 0, avail);
      if (out.success[u]) {
        EXPECT_EQ(actions[u].kind, Action::Kind::Transmit);
        ++per_channel[actions[u].channel];
      }
    }
    for (int s : per_channel) EXPECT_LE(s, 1);
  });
}

}  // namespace
}  // namespace asa
