#include "asa/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "asa/arbiter.hpp"
#include "asa/error.hpp"
#include "asa/random.hpp"
#include "parallel.hpp"

namespace asa {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Eigen::VectorXd ExperimentConfig::eta() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(channels.size()));
  for (std::size_t c = 0; c < channels.size(); ++c) {
    out[static_cast<Eigen::Index>(c)] = channels[c].eta();
  }
  return out;
}

Eigen::VectorXd ExperimentConfig::rates() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(users.size()));
  for (std::size_t u = 0; u < users.size(); ++u) {
    out[static_cast<Eigen::Index>(u)] = users[u].rate;
  }
  return out;
}

std::vector<long> ExperimentConfig::entries() const {
  std::vector<long> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(u.entry);
  return out;
}

double ExperimentConfig::r_min() const {
  if (users.empty()) return 0.0;
  double m = users.front().rate;
  for (const auto& u : users) m = std::min(m, u.rate);
  return m;
}

PolicyConfig ExperimentConfig::policy() const {
  PolicyConfig p;
  p.L0 = L0;
  p.C = C;
  p.epsilon = epsilon;
  p.r_min = r_min();
  p.eta = eta();
  return p;
}

bool ExperimentConfig::synchronized() const {
  return std::all_of(users.begin(), users.end(),
                     [](const UserSpec& u) { return u.entry == 0; });
}

void ExperimentConfig::validate() const {
  if (channels.empty()) throw ConfigError("channel: at least one channel is required");
  if (users.size() > channels.size()) {
    throw ConfigError("user: K <= N required (K=" + std::to_string(users.size()) +
                      ", N=" + std::to_string(channels.size()) + ")");
  }
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!(users[u].rate > 0.0 && users[u].rate < 1.0)) {
      throw ConfigError("user.rate must lie in (0, 1) (user " + std::to_string(u) + ")");
    }
    if (users[u].entry < 0) {
      throw ConfigError("user.entry must be >= 0 (user " + std::to_string(u) + ")");
    }
  }
  if (L0 < 1) throw ConfigError("policy.L0 must be >= 1");
  if (C < 0) throw ConfigError("policy.C must be >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("policy.epsilon must be > 0");
  if (!users.empty() && !(epsilon < r_min() / 2.0)) {
    throw ConfigError("policy.epsilon must be < r_min/2 (epsilon=" +
                      std::to_string(epsilon) +
                      ", r_min/2=" + std::to_string(r_min() / 2.0) + ")");
  }
  if (horizon < L0) throw ConfigError("experiment.horizon must be >= policy.L0");
  if (runs < 1) throw ConfigError("experiment.runs must be >= 1");
  if (!in_region(rates(), eta())) {
    throw ConfigError(
        "user.rate: rates are outside the fixed-allocation throughput region "
        "(sorted r_(i) <= sorted eta_(i) fails)");
  }
}

RunTrace run_once(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  const PolicyConfig policy = cfg.policy();
  const std::size_t n_users = cfg.users.size();
  const std::size_t n_channels = cfg.channels.size();
  const auto horizon = static_cast<std::size_t>(cfg.horizon);
  const long window_start = cfg.horizon - final_half_length(cfg.horizon);

  std::vector<ChannelProcess> channels;
  channels.reserve(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) {
    channels.emplace_back(cfg.channels[c], make_stream(run_seed, StreamTag::Channel, c));
  }
  std::vector<UserState> users;
  std::vector<Rng> streams;
  for (std::size_t u = 0; u < n_users; ++u) {
    users.push_back(make_user(cfg.users[u].rate, policy));
    streams.push_back(make_stream(run_seed, StreamTag::User, u));
  }
  std::optional<CentralizedSimulator> baseline;
  if (cfg.baseline == BaselineMode::Simulated && n_users > 0) {
    const auto entries = cfg.entries();
    baseline.emplace(cfg.rates(), policy.eta, entries, run_seed);
  }

  RunTrace trace;
  trace.successes.resize(horizon);
  trace.good.resize(horizon);
  trace.on_channels.resize(horizon);
  if (cfg.baseline == BaselineMode::Simulated) trace.centralized.resize(horizon);
  trace.user_successes.assign(n_users, 0);
  trace.user_successes_final_half.assign(n_users, 0);

  std::vector<ChannelState> on(n_channels);
  std::vector<Action> actions(n_users);
  std::vector<std::uint8_t> occupied(n_channels);

  for (std::size_t t = 0; t < horizon; ++t) {
    const auto slot = static_cast<long>(t);
    for (std::size_t u = 0; u < n_users; ++u) {
      if (!users[u].entered && cfg.users[u].entry == slot) {
        enter(users[u], policy, streams[u]);
      }
    }
    int n_on = 0;
    for (std::size_t c = 0; c < n_channels; ++c) {
      on[c] = channels[c].next_slot();
      n_on += on[c] == ChannelState::On;
    }
    trace.on_channels[t] = static_cast<std::uint16_t>(n_on);
    for (std::size_t u = 0; u < n_users; ++u) {
      actions[u] = slot_action(users[u], streams[u]);
    }
    const SlotOutcome outcome = resolve_slot(on, actions);
    trace.successes[t] = static_cast<std::uint16_t>(outcome.successes_total);

    // Configuration in force during this slot.
    std::fill(occupied.begin(), occupied.end(), 0);
    bool good = true;
    for (const auto& user : users) {
      if (!user.entered || user.mode != Mode::Access || occupied[user.channel]) {
        good = false;
        break;
      }
      occupied[user.channel] = 1;
    }
    trace.good[t] = good;

    for (std::size_t u = 0; u < n_users; ++u) {
      if (!users[u].entered) continue;
      if (outcome.success[u]) {
        ++trace.user_successes[u];
        if (slot >= window_start) ++trace.user_successes_final_half[u];
      }
      record_outcome(users[u], outcome.availability[u] != 0);
      if (period_complete(users[u], policy)) {
        end_period_transition(users[u], policy, streams[u]);
      }
    }
    if (baseline) {
      trace.centralized[t] = static_cast<std::uint16_t>(baseline->step(slot, on));
    }
  }
  return trace;
}

std::vector<RunTrace> simulate_runs(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  std::vector<RunTrace> runs(static_cast<std::size_t>(cfg.runs));
  detail::parallel_for(runs.size(), resolve_threads(threads), [&](std::size_t r) {
    runs[r] = run_once(cfg, derive_run_seed(cfg.seed, r));
  });
  return runs;
}

namespace {

// Column r holds run r's cumulative regret; row n covers the first n + 1 slots.
struct RunMatrices {
  Eigen::MatrixXd asa;
  Eigen::MatrixXd centralized;
};

RunMatrices cumulative_matrices(const ExperimentConfig& cfg,
                                std::span<const RunTrace> runs) {
  const auto horizon = static_cast<Eigen::Index>(cfg.horizon);
  const auto n_runs = static_cast<Eigen::Index>(runs.size());
  RunMatrices m{Eigen::MatrixXd(horizon, n_runs), Eigen::MatrixXd(horizon, n_runs)};

  Eigen::VectorXd analytic(horizon);
  if (cfg.baseline == BaselineMode::Analytic) {
    const auto rates = cfg.rates();
    const auto entries = cfg.entries();
    for (Eigen::Index t = 0; t < horizon; ++t) {
      analytic[t] = centralized_cumulative(rates, entries, static_cast<long>(t + 1));
    }
  }
  for (Eigen::Index r = 0; r < n_runs; ++r) {
    const RunTrace& run = runs[static_cast<std::size_t>(r)];
    double asa = 0.0;
    double cent = 0.0;
    for (Eigen::Index t = 0; t < horizon; ++t) {
      asa += run.successes[static_cast<std::size_t>(t)];
      m.asa(t, r) = asa;
      if (cfg.baseline == BaselineMode::Simulated) {
        cent += run.centralized[static_cast<std::size_t>(t)];
        m.centralized(t, r) = cent;
      }
    }
    if (cfg.baseline == BaselineMode::Analytic) m.centralized.col(r) = analytic;
  }
  return m;
}

Eigen::ArrayXd row_stderr(const Eigen::MatrixXd& m) {
  const auto n = m.cols();
  if (n < 2) return Eigen::ArrayXd::Zero(m.rows());
  const Eigen::VectorXd mean = m.rowwise().mean();
  const Eigen::ArrayXd ss = (m.colwise() - mean).array().square().rowwise().sum();
  return (ss / static_cast<double>(n - 1) / static_cast<double>(n)).sqrt();
}

}  // namespace

RegretTrace aggregate(const ExperimentConfig& cfg, std::span<const RunTrace> runs) {
  if (runs.empty()) throw InvalidParameter("aggregate: no runs");
  const RunMatrices m = cumulative_matrices(cfg, runs);
  const auto n_runs = static_cast<double>(runs.size());

  RegretTrace out;
  out.runs = static_cast<int>(runs.size());
  out.asa_cum_mean = m.asa.rowwise().mean().array();
  out.centralized_cum = m.centralized.rowwise().mean().array();
  out.regret_mean = out.centralized_cum - out.asa_cum_mean;
  out.regret_stderr = row_stderr(m.centralized - m.asa);

  out.good_frac = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cfg.horizon));
  for (const auto& run : runs) {
    for (Eigen::Index t = 0; t < out.good_frac.size(); ++t) {
      out.good_frac[t] += run.good[static_cast<std::size_t>(t)];
    }
  }
  out.good_frac /= n_runs;

  const auto n_users = static_cast<Eigen::Index>(cfg.users.size());
  const double window = static_cast<double>(final_half_length(cfg.horizon));
  Eigen::MatrixXd rates(n_users, static_cast<Eigen::Index>(runs.size()));
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (Eigen::Index u = 0; u < n_users; ++u) {
      rates(u, static_cast<Eigen::Index>(r)) =
          static_cast<double>(runs[r].user_successes_final_half[static_cast<std::size_t>(u)]) /
          window;
    }
  }
  out.user_rate_final_half = rates.rowwise().mean();
  out.user_rate_final_half_stderr = row_stderr(rates).matrix();
  return out;
}

RegretTrace monte_carlo(const ExperimentConfig& cfg, int threads) {
  const auto runs = simulate_runs(cfg, threads);
  return aggregate(cfg, runs);
}

std::vector<PeriodSpan> period_schedule(int L0, int C, long horizon) {
  std::vector<PeriodSpan> out;
  long end = 0;
  for (int k = 0;; ++k) {
    const int length = detection_length(k, L0, C);
    if (end + length > horizon) break;
    end += length;
    out.push_back({k + 1, length, end});
  }
  return out;
}

std::vector<PeriodEstimate> estimate_Pie(const ExperimentConfig& cfg,
                                         std::span<const RunTrace> runs) {
  if (!cfg.synchronized()) {
    throw InvalidParameter(
        "period-indexed estimation needs every user to enter at slot 0");
  }
  if (runs.empty()) throw InvalidParameter("estimate_Pie: no runs");
  std::vector<PeriodEstimate> out;
  for (const PeriodSpan& p : period_schedule(cfg.L0, cfg.C, cfg.horizon)) {
    long bad = 0;
    for (const auto& run : runs) {
      if (!run.good[static_cast<std::size_t>(p.end_slot - 1)]) ++bad;
    }
    out.push_back({p, static_cast<double>(bad) / static_cast<double>(runs.size())});
  }
  return out;
}

std::vector<PeriodEstimate> estimate_Pie(const ExperimentConfig& cfg, int threads) {
  if (!cfg.synchronized()) {
    throw InvalidParameter(
        "period-indexed estimation needs every user to enter at slot 0");
  }
  const auto runs = simulate_runs(cfg, threads);
  return estimate_Pie(cfg, runs);
}

BoundReport bound_check(const ExperimentConfig& cfg, std::span<const RunTrace> runs) {
  if (cfg.baseline != BaselineMode::Analytic) {
    throw InvalidParameter("bound_check needs the analytic baseline");
  }
  const auto estimates = estimate_Pie(cfg, runs);
  const RegretTrace trace = aggregate(cfg, runs);
  const auto n_channels = static_cast<double>(cfg.channels.size());
  const auto n_runs = static_cast<double>(runs.size());

  BoundReport report;
  double rhs = 0.0;
  double rhs_var = 0.0;
  for (const PeriodEstimate& e : estimates) {
    const double weight = n_channels * e.period.length;
    rhs += weight * e.p_err;
    rhs_var += weight * weight * e.p_err * (1.0 - e.p_err) / n_runs;

    BoundRow row;
    row.period = e.period;
    row.p_err = e.p_err;
    const auto at = static_cast<Eigen::Index>(e.period.end_slot - 1);
    row.regret_mean = trace.regret_mean[at];
    row.regret_stderr = trace.regret_stderr[at];
    row.rhs = rhs;
    row.rhs_stderr = std::sqrt(rhs_var);
    const double combined =
        std::sqrt(row.regret_stderr * row.regret_stderr + rhs_var);
    row.margin = row.rhs + 3.0 * combined - row.regret_mean;
    row.holds = row.margin >= 0.0;
    if (!row.holds && report.holds) {
      report.holds = false;
      report.first_violation = e.period.index;
    }
    report.rows.push_back(row);
  }
  return report;
}

BoundReport bound_check(const ExperimentConfig& cfg, int threads) {
  if (!cfg.synchronized()) {
    throw InvalidParameter("bound_check needs every user to enter at slot 0");
  }
  const auto runs = simulate_runs(cfg, threads);
  return bound_check(cfg, runs);
}

}  // namespace asa
