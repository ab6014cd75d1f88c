#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "asa/cli.hpp"
#include "asa/error.hpp"

namespace asa {

namespace {

// Shortest round-trip representation; identical bytes for identical values.
std::string num(double x) {
  if (!std::isfinite(x)) throw Error("non-finite value in CSV output");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string baseline_name(BaselineMode m) {
  return m == BaselineMode::Analytic ? "analytic" : "simulated";
}

struct Common {
  std::string config_path;
  std::string out_path;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c, bool with_out) {
  cmd->add_option("--config", c.config_path, "experiment config file")->required();
  if (with_out) cmd->add_option("--out", c.out_path, "CSV output path (default stdout)");
  cmd->add_option("--runs", c.runs, "Monte Carlo runs (overrides experiment.runs)");
  cmd->add_option("--seed", c.seed, "master seed (overrides experiment.seed)");
  cmd->add_option("--horizon", c.horizon, "horizon in slots (overrides experiment.horizon)");
  cmd->add_option("--threads", c.threads, "worker threads, 0 = auto");
}

Config load(const Common& c) {
  Config cfg = parse_config(c.config_path);
  ExperimentConfig& e = cfg.experiment;
  if (c.runs) e.runs = *c.runs;
  if (c.seed) e.seed = *c.seed;
  if (c.horizon) e.horizon = *c.horizon;
  e.validate();
  return cfg;
}

int threads_of(const Common& c) {
  if (c.threads) return *c.threads;
  if (const char* env = std::getenv("ASA_SIM_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size()) return n;
  }
  return 0;
}

RunManifest manifest_for(const std::string& sub, const std::string& schema,
                         const Common& c, const ExperimentConfig& e) {
  RunManifest m;
  m.subcommand = sub;
  m.schema = schema;
  m.config_path = c.config_path;
  m.seed = e.seed;
  m.runs = e.runs;
  m.horizon = e.horizon;
  m.baseline = baseline_name(e.baseline);
  m.out_path = c.out_path.empty() ? "-" : c.out_path;
  return m;
}

void echo_manifest(std::ostream& out, const RunManifest& m) {
  out << m.version << " " << m.subcommand << ": config=" << m.config_path
      << " seed=" << m.seed << " runs=" << m.runs << " horizon=" << m.horizon
      << " out=" << m.out_path << "\n";
}

// Writes via `emit` to the requested file, or to `out` when no path was given.
template <typename Emit>
void emit_csv(const std::string& path, std::ostream& out, Emit&& emit) {
  if (path.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write output file " + path);
  emit(file);
  file.flush();
  if (!file) throw Error("failed writing output file " + path);
}

void print_fit(std::ostream& out, const char* name, const std::optional<DecayFit>& fit) {
  if (!fit) {
    out << name << " fit: insufficient data (fewer than 3 nonzero rates)\n";
    return;
  }
  out << name << " fit: slope=" << num(fit->slope) << " intercept=" << num(fit->intercept)
      << " r2=" << num(fit->r_squared) << " points=" << fit->points << "\n";
}

}  // namespace

void write_manifest(std::ostream& os, const RunManifest& m) {
  os << "# " << m.version << "\n"
     << "# schema: " << m.schema << "\n"
     << "# subcommand: " << m.subcommand << "\n"
     << "# config: " << m.config_path << "\n"
     << "# seed: " << m.seed << "\n"
     << "# runs: " << m.runs << "\n"
     << "# horizon: " << m.horizon << "\n"
     << "# baseline: " << m.baseline << "\n";
}

void write_regret_csv(std::ostream& os, const RunManifest& m, const RegretTrace& trace) {
  write_manifest(os, m);
  os << "slot,centralized_cum,asa_cum_mean,regret_mean,regret_stderr,good_frac\n";
  for (Eigen::Index t = 0; t < trace.regret_mean.size(); ++t) {
    os << (t + 1) << ',' << num(trace.centralized_cum[t]) << ','
       << num(trace.asa_cum_mean[t]) << ',' << num(trace.regret_mean[t]) << ','
       << num(trace.regret_stderr[t]) << ',' << num(trace.good_frac[t]) << '\n';
  }
}

void write_detector_csv(std::ostream& os, const RunManifest& m,
                        const DetectorCurve& curve) {
  write_manifest(os, m);
  os << "L,trials,false_alarms,misses,fa,md,h0_mean,h1_mean\n";
  for (const auto& p : curve.points) {
    os << p.L << ',' << p.trials << ',' << p.false_alarms << ',' << p.misses << ','
       << num(p.fa) << ',' << num(p.md) << ',' << num(p.h0_mean) << ','
       << num(p.h1_mean) << '\n';
  }
}

void write_bound_csv(std::ostream& os, const RunManifest& m, const BoundReport& report) {
  write_manifest(os, m);
  os << "period,length,end_slot,p_err,regret_mean,regret_stderr,rhs,rhs_stderr,margin,"
        "holds\n";
  for (const auto& r : report.rows) {
    os << r.period.index << ',' << r.period.length << ',' << r.period.end_slot << ','
       << num(r.p_err) << ',' << num(r.regret_mean) << ',' << num(r.regret_stderr)
       << ',' << num(r.rhs) << ',' << num(r.rhs_stderr) << ',' << num(r.margin) << ','
       << (r.holds ? 1 : 0) << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed multiaccess simulator for on-off renewal channels"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common sim;
  Common det;
  Common region;
  Common bound;
  std::optional<long> trials;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo regret trace");
  add_common(simulate, sim, true);
  auto* detector = app.add_subcommand("detector-curve", "occupancy detector error rates");
  add_common(detector, det, true);
  detector->add_option("--trials", trials, "trials per L (overrides detector.trials)");
  auto* region_check = app.add_subcommand("region-check", "throughput-region membership");
  region_check->add_option("--config", region.config_path, "experiment config file")
      ->required();
  auto* bound_cmd = app.add_subcommand("bound-check", "per-period regret bound check");
  add_common(bound_cmd, bound, true);

  // CLI11 parses in reverse order.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*simulate) {
      const Config cfg = load(sim);
      const auto m = manifest_for("simulate", "regret-trace/1", sim, cfg.experiment);
      echo_manifest(out, m);
      const RegretTrace trace = monte_carlo(cfg.experiment, threads_of(sim));
      emit_csv(sim.out_path, out, [&](std::ostream& os) { write_regret_csv(os, m, trace); });
      const auto last = trace.regret_mean.size() - 1;
      out << "final regret_mean=" << num(trace.regret_mean[last])
          << " stderr=" << num(trace.regret_stderr[last]) << "\n";
    } else if (*detector) {
      Config cfg = load(det);
      if (trials) cfg.detector.trials = *trials;
      const ExperimentConfig& e = cfg.experiment;
      if (e.users.empty()) throw ConfigError("detector-curve needs a user entry for the occupant rate");
      auto m = manifest_for("detector-curve", "detector-curve/1", det, e);
      m.runs = static_cast<int>(cfg.detector.trials);
      echo_manifest(out, m);
      const DetectorCurve curve =
          detector_error_curve(e.channels.front(), e.users.front().rate, e.epsilon,
                               cfg.detector.L_list, cfg.detector.trials, e.seed,
                               threads_of(det));
      emit_csv(det.out_path, out, [&](std::ostream& os) { write_detector_csv(os, m, curve); });
      print_fit(out, "false-alarm", curve.fa_fit);
      print_fit(out, "miss-detection", curve.md_fit);
    } else if (*region_check) {
      const Config cfg = parse_config(region.config_path, Validation::SyntaxOnly);
      const ExperimentConfig& e = cfg.experiment;
      const Eigen::VectorXd eta = e.eta();
      if (!in_region(e.rates(), eta)) {
        out << "feasible: no\n";
        return 3;
      }
      const Allocation alloc = fixed_allocation(e.rates(), eta);
      out << "feasible: yes\n";
      for (std::size_t u = 0; u < alloc.assignment.size(); ++u) {
        const std::size_t c = alloc.assignment[u];
        out << "user " << u << " (r=" << num(e.users[u].rate) << ") -> channel " << c
            << " (eta=" << num(eta[static_cast<Eigen::Index>(c)]) << ")\n";
      }
    } else if (*bound_cmd) {
      const Config cfg = load(bound);
      const ExperimentConfig& e = cfg.experiment;
      const auto m = manifest_for("bound-check", "bound-check/1", bound, e);
      echo_manifest(out, m);
      const auto runs = simulate_runs(e, threads_of(bound));
      const BoundReport report = bound_check(e, runs);
      emit_csv(bound.out_path, out, [&](std::ostream& os) { write_bound_csv(os, m, report); });

      std::vector<double> p;
      for (const auto& row : report.rows) p.push_back(row.p_err);
      std::optional<DecayFit> fit;
      try {
        fit = decay_fit(p);
      } catch (const InsufficientData&) {
      }
      print_fit(out, "p_err", fit);
      std::vector<int> counts;
      for (const auto& u : e.users) {
        counts.push_back(static_cast<int>(qualified_channels(u.rate, e.eta()).size()));
      }
      out << "lucky separation bound=" << num(lucky_bound(static_cast<int>(counts.size()), counts))
          << "\n";
      if (!report.holds) {
        err << "bound violated at period " << *report.first_violation << "\n";
        return 2;
      }
      out << "bound holds at all " << report.rows.size() << " periods\n";
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace asa
