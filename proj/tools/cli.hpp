// Command-line front end: argument parsing, figure presets and CSV/JSON output.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/bloch.hpp"
#include "thermo/fisher.hpp"

namespace thermo::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Subcommand { FiCurve, Ensemble, Bandwidth, Trajectory, Preset };
enum class OutputFormat { Auto, Csv, Json };
enum class PresetId { Fig3, Fig4a, Fig4b, Fig4Collapse, Fig5Iid, Fig5Sms, Fig6ShortTau };

std::string to_string(Subcommand cmd);
std::string to_string(PresetId id);
/// Throws std::invalid_argument for unknown ids.
PresetId parse_preset(const std::string& text);

/// Input state selector: a named state or an explicit Bloch vector.
struct InputState {
  enum class Kind { Ground, Excited, Thermal, MaxMixed, Vector } kind = Kind::Ground;
  QubitState vector{};

  /// `ground|excited|thermal|maxmixed|rx,ry,rz`. Throws std::invalid_argument
  /// on malformed text and std::domain_error on |r| > 1.
  static InputState parse(const std::string& text);
  /// CSV-safe label: the name, or `rx;ry;rz` for explicit vectors.
  std::string label() const;
  /// `thermal` resolves to the thermal state of `bath`.
  QubitState resolve(const BathParams& bath) const;
};

struct RunConfig {
  Subcommand command = Subcommand::FiCurve;
  std::optional<PresetId> preset;

  /// Schemes to evaluate, in output order.
  std::vector<Scheme> schemes{Scheme::SMS};
  int n = 3;
  double tau = 4.0;
  double phi = 0.0;
  double omega_over_gamma = 0.0;
  InputState rho0{};
  std::string rho0_text = "ground";

  double t_min = 0.05;
  double t_max = 3.0;
  int t_steps = 200;

  int samples = 1000;
  bool include_poles = true;
  int n_max = 7;

  double true_temperature = 1.0;
  int trials = 2000;
  double prior_lo = 0.1;
  double prior_hi = 5.0;

  std::uint64_t seed = 1;
  std::optional<unsigned> threads;

  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::Auto;

  /// Format actually written, resolving Auto from the subcommand and path.
  OutputFormat effective_format() const;
};

/// Invalid command line: `message` holds one line per problem.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for `--help` / `--version`; `text` is what should be printed.
struct InfoRequest {
  std::string text;
};

/// Parses argv (argv[0] is the program name). An optional `--config FILE`
/// supplies flat `key=value` lines using the long flag names; command-line
/// flags take precedence and unknown keys are rejected. Throws UsageError
/// or InfoRequest.
RunConfig parse(int argc, const char* const* argv);

struct RunResult {
  int exit_code = 0;
  std::string message;
};

/// Executes the configuration. Output goes to config.out_path (with a
/// `<out>.meta.json` sidecar) or to `stdout_text` when no path is set.
/// Exit codes: 0 ok, 1 compute-budget or degenerate input, 3 I/O failure.
RunResult run(const RunConfig& config, std::string* stdout_text = nullptr);

/// Entry point used by the executable; returns the process exit code.
int main_entry(int argc, const char* const* argv);

/// `%.12g` formatting used for every float written to CSV.
std::string format_number(double value);

}  // namespace thermo::cli
