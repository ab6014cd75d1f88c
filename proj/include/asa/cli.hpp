#ifndef ASA_CLI_HPP_
#define ASA_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "asa/experiment.hpp"

namespace asa {

inline constexpr std::string_view kVersion = "asa-sim 1.0.0";

struct DetectorSettings {
  std::vector<int> L_list = {12, 24, 36, 48, 60, 72, 84, 96, 108, 120};
  long trials = 10000;
};

struct Config {
  ExperimentConfig experiment;
  DetectorSettings detector;
};

enum class Validation { Full, SyntaxOnly };

// Parses the key-value config format (see README) and, by default, validates
// the result.  Throws ConfigError naming the offending key or constraint.
Config parse_config_text(std::string_view text, std::string_view source = "<string>",
                         Validation validation = Validation::Full);
Config parse_config(const std::string& path, Validation validation = Validation::Full);

// Provenance written as comment lines at the top of every CSV.
struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::string schema;
  std::uint64_t seed = 0;
  int runs = 0;
  long horizon = 0;
  std::string baseline;
  std::string out_path;  // echoed on stdout, not written into the CSV
  std::string version{kVersion};
};

void write_manifest(std::ostream& os, const RunManifest& m);

void write_regret_csv(std::ostream& os, const RunManifest& m, const RegretTrace& trace);
void write_detector_csv(std::ostream& os, const RunManifest& m,
                        const DetectorCurve& curve);
void write_bound_csv(std::ostream& os, const RunManifest& m, const BoundReport& report);

// Runs one subcommand (simulate, detector-curve, region-check, bound-check).
// args excludes the program name.  Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asa

#endif  // ASA_CLI_HPP_
