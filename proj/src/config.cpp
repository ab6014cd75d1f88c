#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "asa/cli.hpp"
#include "asa/error.hpp"

namespace asa {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Parser {
 public:
  Parser(std::string_view source, Validation validation)
      : source_(source), validation_(validation) {}

  void line(std::size_t number, std::string_view raw) {
    line_ = number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string_view text = trim(raw);
    if (text.empty()) return;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    key_ = std::string(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (value.empty()) fail("empty value");
    assign(value);
  }

  Config finish();

 private:
  struct ChannelEntry {
    std::string kind;
    std::optional<double> on_mean;
    std::optional<double> off_mean;
    long count = 1;
  };
  struct UserEntry {
    double rate = 0.0;
    long entry = 0;
    long count = 1;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(std::string(source_) + ":" + std::to_string(line_) + ": " +
                      (key_.empty() ? "" : key_ + ": ") + what);
  }

  double real(std::string_view v) const {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("not a number");
    return x;
  }

  long integer(std::string_view v) const {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("not an integer");
    return x;
  }

  ChannelEntry& current_channel() {
    if (channels_.empty()) fail("channel.kind must open each channel entry");
    return channels_.back();
  }

  UserEntry& current_user() {
    if (users_.empty()) fail("user.rate must open each user entry");
    return users_.back();
  }

  void assign(std::string_view value) {
    if (key_ == "channel.kind") {
      if (value != "geometric" && value != "deterministic") {
        fail("must be 'geometric' or 'deterministic'");
      }
      channels_.push_back({std::string(value), {}, {}, 1});
    } else if (key_ == "channel.on_mean") {
      current_channel().on_mean = real(value);
    } else if (key_ == "channel.off_mean") {
      current_channel().off_mean = real(value);
    } else if (key_ == "channel.count") {
      current_channel().count = integer(value);
      if (current_channel().count < 1) fail("must be >= 1");
    } else if (key_ == "user.rate") {
      users_.push_back({real(value), 0, 1});
    } else if (key_ == "user.entry") {
      current_user().entry = integer(value);
    } else if (key_ == "user.count") {
      current_user().count = integer(value);
      if (current_user().count < 1) fail("must be >= 1");
    } else if (key_ == "policy.L0") {
      L0_ = static_cast<int>(integer(value));
    } else if (key_ == "policy.C") {
      C_ = static_cast<int>(integer(value));
    } else if (key_ == "policy.epsilon") {
      epsilon_ = real(value);
    } else if (key_ == "experiment.horizon") {
      horizon_ = integer(value);
    } else if (key_ == "experiment.runs") {
      runs_ = static_cast<int>(integer(value));
    } else if (key_ == "experiment.seed") {
      seed_ = static_cast<std::uint64_t>(integer(value));
    } else if (key_ == "experiment.baseline") {
      if (value == "analytic") {
        baseline_ = BaselineMode::Analytic;
      } else if (value == "simulated") {
        baseline_ = BaselineMode::Simulated;
      } else {
        fail("must be 'analytic' or 'simulated'");
      }
    } else if (key_ == "detector.L_list") {
      detector_.L_list.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        detector_.L_list.push_back(static_cast<int>(integer(trim(rest.substr(0, comma)))));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key_ == "detector.trials") {
      detector_.trials = integer(value);
    } else {
      fail("unknown key");
    }
  }

  std::string_view source_;
  Validation validation_;
  std::size_t line_ = 0;
  std::string key_;
  std::vector<ChannelEntry> channels_;
  std::vector<UserEntry> users_;
  std::optional<int> L0_;
  std::optional<int> C_;
  std::optional<double> epsilon_;
  std::optional<long> horizon_;
  int runs_ = 20;
  std::uint64_t seed_ = 1;
  BaselineMode baseline_ = BaselineMode::Analytic;
  DetectorSettings detector_;
};

Config Parser::finish() {
  auto missing = [this](const std::string& key) {
    throw ConfigError(std::string(source_) + ": missing required key " + key);
  };
  Config cfg;
  ExperimentConfig& e = cfg.experiment;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const ChannelEntry& c = channels_[i];
    if (!c.on_mean) missing("channel.on_mean (channel entry " + std::to_string(i) + ")");
    if (!c.off_mean) missing("channel.off_mean (channel entry " + std::to_string(i) + ")");
    const auto make = c.kind == "geometric" ? &PeriodDistribution::geometric
                                            : &PeriodDistribution::deterministic;
    try {
      const ChannelParams params(make(*c.on_mean), make(*c.off_mean));
      for (long n = 0; n < c.count; ++n) e.channels.push_back(params);
    } catch (const InvalidParameter& ex) {
      throw ConfigError(std::string(source_) + ": channel entry " + std::to_string(i) +
                        ": " + ex.what());
    }
  }
  for (const UserEntry& u : users_) {
    for (long n = 0; n < u.count; ++n) e.users.push_back({u.rate, u.entry});
  }
  if (e.channels.empty()) missing("channel.kind");
  if (!L0_) missing("policy.L0");
  if (!C_) missing("policy.C");
  if (!horizon_) missing("experiment.horizon");
  e.L0 = *L0_;
  e.C = *C_;
  e.horizon = *horizon_;
  e.runs = runs_;
  e.seed = seed_;
  e.baseline = baseline_;
  e.epsilon = epsilon_ ? *epsilon_ : default_epsilon(e.users.empty() ? 0.5 : e.r_min());
  cfg.detector = detector_;
  if (validation_ == Validation::SyntaxOnly) return cfg;
  try {
    e.validate();
  } catch (const ConfigError& ex) {
    throw ConfigError(std::string(source_) + ": " + ex.what());
  }
  return cfg;
}

}  // namespace

Config parse_config_text(std::string_view text, std::string_view source,
                         Validation validation) {
  Parser parser(source, validation);
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    parser.line(++number, text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text = text.substr(nl + 1);
  }
  return parser.finish();
}

Config parse_config(const std::string& path, Validation validation) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path, validation);
}

}  // namespace asa
