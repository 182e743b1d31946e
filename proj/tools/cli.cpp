#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "thermo/ensemble.hpp"
#include "thermo/povm.hpp"
#include "thermo/trajectory.hpp"

namespace thermo::cli {

using nlohmann::ordered_json;

std::string to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::FiCurve: return "fi-curve";
    case Subcommand::Ensemble: return "ensemble";
    case Subcommand::Bandwidth: return "bandwidth";
    case Subcommand::Trajectory: return "trajectory";
    case Subcommand::Preset: return "preset";
  }
  return "?";
}

namespace {

struct PresetName {
  PresetId id;
  const char* name;
};

constexpr PresetName kPresets[] = {
    {PresetId::Fig3, "fig3"},
    {PresetId::Fig4a, "fig4a"},
    {PresetId::Fig4b, "fig4b"},
    {PresetId::Fig4Collapse, "fig4-collapse"},
    {PresetId::Fig5Iid, "fig5-iid"},
    {PresetId::Fig5Sms, "fig5-sms"},
    {PresetId::Fig6ShortTau, "fig6-short-tau"},
};

}  // namespace

std::string to_string(PresetId id) {
  for (const auto& p : kPresets) {
    if (p.id == id) return p.name;
  }
  return "?";
}

PresetId parse_preset(const std::string& text) {
  for (const auto& p : kPresets) {
    if (text == p.name) return p.id;
  }
  throw std::invalid_argument("unknown preset '" + text +
                              "' (expected fig3, fig4a, fig4b, fig4-collapse, fig5-iid, "
                              "fig5-sms or fig6-short-tau)");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

InputState InputState::parse(const std::string& text) {
  InputState s;
  if (text == "ground") {
    s.kind = Kind::Ground;
  } else if (text == "excited") {
    s.kind = Kind::Excited;
  } else if (text == "thermal") {
    s.kind = Kind::Thermal;
  } else if (text == "maxmixed") {
    s.kind = Kind::MaxMixed;
  } else {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) {
        throw std::invalid_argument("--rho0 '" + text +
                                    "' must be ground, excited, thermal, maxmixed or rx,ry,rz");
      }
      parts.push_back(v);
    }
    if (parts.size() != 3) {
      throw std::invalid_argument("--rho0 '" + text + "' needs exactly three Bloch components");
    }
    const QubitState v{parts[0], parts[1], parts[2]};
    if (!v.is_physical() || !std::isfinite(v.norm_squared())) {
      throw std::domain_error("--rho0 '" + text + "' has Bloch norm " + format_number(v.norm()) +
                              " > 1 (not a valid density matrix)");
    }
    s.kind = Kind::Vector;
    s.vector = v;
  }
  return s;
}

std::string InputState::label() const {
  switch (kind) {
    case Kind::Ground: return "ground";
    case Kind::Excited: return "excited";
    case Kind::Thermal: return "thermal";
    case Kind::MaxMixed: return "maxmixed";
    case Kind::Vector:
      return format_number(vector.rx) + ";" + format_number(vector.ry) + ";" +
             format_number(vector.rz);
  }
  return "?";
}

QubitState InputState::resolve(const BathParams& bath) const {
  switch (kind) {
    case Kind::Ground: return QubitState::ground();
    case Kind::Excited: return QubitState::excited();
    case Kind::Thermal: return thermal_state(bath);
    case Kind::MaxMixed: return QubitState::maximally_mixed();
    case Kind::Vector: return vector;
  }
  return {};
}

OutputFormat RunConfig::effective_format() const {
  if (format != OutputFormat::Auto) return format;
  const auto ends_with = [&](const char* ext) {
    const std::string e(ext);
    return out_path.size() >= e.size() && out_path.compare(out_path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends_with(".json")) return OutputFormat::Json;
  if (ends_with(".csv")) return OutputFormat::Csv;
  return command == Subcommand::Trajectory ? OutputFormat::Json : OutputFormat::Csv;
}

namespace {

/// Radians, or `pi`, `pi/k`, `a*pi/k`.
double parse_angle(const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  }
  double factor = 1.0;
  std::string head = text.substr(0, pos);
  if (!head.empty()) {
    if (head.back() != '*') throw std::invalid_argument(text);
    head.pop_back();
    factor = std::stod(head);
  }
  std::string tail = text.substr(pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument(text);
    factor /= std::stod(tail.substr(1));
  }
  return factor * std::numbers::pi;
}

}  // namespace

RunConfig parse(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Qubit thermometry: Fisher information of repeated and sequential measurements"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file using the long flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string scheme_text;
  std::string phi_text = "0";
  std::string format_text = "auto";
  std::string preset_text;
  bool no_poles = false;
  unsigned threads = 0;

  app.add_option("--scheme", scheme_text, "iid, sms or both");
  app.add_option("--n", cfg.n, "number of measurements");
  app.add_option("--tau", cfg.tau, "interval between measurements, units of 1/gamma");
  app.add_option("--phi", phi_text, "POVM angle in [0, pi/4]; accepts pi/8 style");
  app.add_option("--omega-gamma", cfg.omega_over_gamma, "probe frequency over coupling");
  app.add_option("--rho0", cfg.rho0_text, "ground|excited|thermal|maxmixed|rx,ry,rz");
  app.add_option("--T-min", cfg.t_min, "lowest temperature, units of hbar*Omega/k_B");
  app.add_option("--T-max", cfg.t_max, "highest temperature");
  app.add_option("--T-steps", cfg.t_steps, "number of grid temperatures");
  app.add_option("--samples", cfg.samples, "Hilbert-Schmidt input-state samples");
  app.add_flag("--no-poles", no_poles, "do not add ground/excited states to the ensemble");
  app.add_option("--n-max", cfg.n_max, "largest n for the bandwidth table");
  app.add_option("--true-T", cfg.true_temperature, "bath temperature for trajectories");
  app.add_option("--trials", cfg.trials, "number of simulated records");
  app.add_option("--prior-lo", cfg.prior_lo, "lower end of the estimation range");
  app.add_option("--prior-hi", cfg.prior_hi, "upper end of the estimation range");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--threads", threads, "worker threads (default: THERMO_THREADS or auto)");
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  app.add_option("--format", format_text, "csv, json or auto (from --out extension)");

  auto* fi_curve = app.add_subcommand("fi-curve", "FI versus temperature for one input state");
  auto* ensemble = app.add_subcommand("ensemble", "min/mean/max FI over random input states");
  auto* bandwidth = app.add_subcommand("bandwidth", "SMS/IID band-width ratio for n = 1..n_max");
  auto* trajectory = app.add_subcommand("trajectory", "simulate records and estimate T");
  auto* preset = app.add_subcommand("preset", "figure reproduction presets");
  preset->add_option("id", preset_text, "preset id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    std::ostringstream os;
    if (app.get_option("--version")->count() > 0) {
      os << kToolVersion << '\n';
    } else {
      os << app.help();
    }
    throw InfoRequest{os.str()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (fi_curve->parsed()) cfg.command = Subcommand::FiCurve;
  if (ensemble->parsed()) cfg.command = Subcommand::Ensemble;
  if (bandwidth->parsed()) cfg.command = Subcommand::Bandwidth;
  if (trajectory->parsed()) cfg.command = Subcommand::Trajectory;
  if (preset->parsed()) cfg.command = Subcommand::Preset;

  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
  };

  if (cfg.command == Subcommand::Preset) {
    try {
      cfg.preset = parse_preset(preset_text);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }

  if (scheme_text.empty()) {
    scheme_text = cfg.command == Subcommand::Ensemble ? "both" : "sms";
  }
  if (scheme_text == "both") {
    check(cfg.command != Subcommand::Trajectory,
          "--scheme both is not allowed for trajectory (use iid or sms)");
    cfg.schemes = {Scheme::IID, Scheme::SMS};
  } else {
    try {
      cfg.schemes = {parse_scheme(scheme_text)};
    } catch (const std::exception& e) {
      errors.push_back(std::string("--scheme: ") + e.what() + " or both");
    }
  }

  try {
    cfg.phi = parse_angle(phi_text);
    check(cfg.phi >= 0.0 && cfg.phi <= MeasurementFamily::kMaxPhi + 1e-15,
          "--phi " + phi_text + " is outside the valid range [0, pi/4] = [0, 0.785398163397]");
    cfg.phi = std::min(cfg.phi, MeasurementFamily::kMaxPhi);
  } catch (const std::exception&) {
    errors.push_back("--phi '" + phi_text + "' is not an angle in radians");
  }

  try {
    cfg.rho0 = InputState::parse(cfg.rho0_text);
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }

  if (format_text == "csv") {
    cfg.format = OutputFormat::Csv;
  } else if (format_text == "json") {
    cfg.format = OutputFormat::Json;
  } else if (format_text == "auto") {
    cfg.format = OutputFormat::Auto;
  } else {
    errors.push_back("--format '" + format_text + "' must be csv, json or auto");
  }

  cfg.include_poles = !no_poles;
  if (threads > 0) cfg.threads = threads;

  check(cfg.n >= 1, "--n must be >= 1");
  check(cfg.tau >= 0.0 && std::isfinite(cfg.tau), "--tau must be a non-negative number");
  check(std::isfinite(cfg.omega_over_gamma), "--omega-gamma must be finite");
  check(cfg.t_min > 0.0, "--T-min must be > 0");
  check(cfg.t_max > cfg.t_min, "--T-max must be greater than --T-min");
  check(cfg.t_steps >= 2, "--T-steps must be >= 2");
  check(cfg.samples >= 1, "--samples must be >= 1");
  check(cfg.n_max >= 1 && cfg.n_max <= kMaxBandwidthN, "--n-max must lie in [1, 12]");
  check(cfg.true_temperature > 0.0, "--true-T must be > 0");
  check(cfg.trials >= 100, "--trials must be >= 100");
  check(cfg.prior_lo > 0.0 && cfg.prior_hi > cfg.prior_lo,
        "--prior-lo/--prior-hi must satisfy 0 < lo < hi");

  if (!errors.empty()) {
    std::string message;
    for (const auto& e : errors) message += e + "\n";
    message.pop_back();
    throw UsageError(message);
  }
  return cfg;
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double angle_pi_over(int k) { return std::numbers::pi / k; }

/// Everything run() writes: the primary artifact plus parameters for the sidecar.
struct Artifact {
  std::string body;
  ordered_json parameters;
};

ordered_json common_parameters(const RunConfig& cfg) {
  ordered_json p;
  p["subcommand"] = to_string(cfg.command);
  if (cfg.preset) p["preset"] = to_string(*cfg.preset);
  ordered_json schemes = ordered_json::array();
  for (auto s : cfg.schemes) schemes.push_back(to_string(s));
  p["schemes"] = schemes;
  p["n"] = cfg.n;
  p["tau"] = cfg.tau;
  p["phi"] = cfg.phi;
  p["omega_over_gamma"] = cfg.omega_over_gamma;
  p["rho0"] = cfg.rho0.label();
  p["T_min"] = cfg.t_min;
  p["T_max"] = cfg.t_max;
  p["T_steps"] = cfg.t_steps;
  p["samples"] = cfg.samples;
  p["include_poles"] = cfg.include_poles;
  p["n_max"] = cfg.n_max;
  p["true_T"] = cfg.true_temperature;
  p["trials"] = cfg.trials;
  p["prior_lo"] = cfg.prior_lo;
  p["prior_hi"] = cfg.prior_hi;
  p["seed"] = cfg.seed;
  p["units"] = {{"tau", "1/gamma"}, {"T", "hbar*Omega/k_B"}, {"FI", "(k_B/hbar*Omega)^2"}};
  return p;
}

TemperatureGrid make_grid(const RunConfig& cfg) {
  TemperatureGrid grid = TemperatureGrid::uniform(cfg.t_min, cfg.t_max, cfg.t_steps);
  grid.omega_over_gamma = cfg.omega_over_gamma;
  return grid;
}

unsigned thread_count(const RunConfig& cfg) { return cfg.threads.value_or(0); }

struct CurveSpec {
  Scheme scheme;
  int n;
  double tau;
  double phi;
};

Artifact fi_curves(const RunConfig& cfg, const std::vector<CurveSpec>& curves) {
  const bool csv = cfg.effective_format() == OutputFormat::Csv;
  const TemperatureGrid grid = make_grid(cfg);
  std::ostringstream os;
  ordered_json rows = ordered_json::array();
  if (csv) os << "scheme,n,tau,phi,T,rho0,FI\n";
  for (const auto& c : curves) {
    const MeasurementFamily family(c.phi);
    for (std::size_t i = 0; i < grid.temperatures.size(); ++i) {
      const BathParams bath = grid.bath(i);
      const ProtocolSpec spec{c.scheme, c.n, c.tau, cfg.rho0.resolve(bath), family};
      const double fi = fisher_information(spec, bath).value;
      if (csv) {
        os << to_string(c.scheme) << ',' << c.n << ',' << format_number(c.tau) << ','
           << format_number(c.phi) << ',' << format_number(bath.temperature()) << ','
           << cfg.rho0.label() << ',' << format_number(fi) << '\n';
      } else {
        rows.push_back({{"scheme", to_string(c.scheme)},
                        {"n", c.n},
                        {"tau", c.tau},
                        {"phi", c.phi},
                        {"T", bath.temperature()},
                        {"rho0", cfg.rho0.label()},
                        {"FI", fi}});
      }
    }
  }
  if (!csv) os << ordered_json{{"rows", rows}}.dump(2) << '\n';
  return {os.str(), common_parameters(cfg)};
}

Artifact ensemble_curves(const RunConfig& cfg, const std::vector<CurveSpec>& curves) {
  const bool csv = cfg.effective_format() == OutputFormat::Csv;
  const TemperatureGrid grid = make_grid(cfg);
  const EnsembleSpec ens{cfg.samples, cfg.seed, cfg.include_poles};
  const auto states = sample_states(ens);
  std::ostringstream os;
  ordered_json out_curves = ordered_json::array();
  if (csv) os << "scheme,n,tau,phi,T,fi_min,fi_mean,fi_max\n";
  for (const auto& c : curves) {
    const BandCurve band = band_curve(c.scheme, c.n, c.tau, MeasurementFamily(c.phi), grid,
                                      states, thread_count(cfg));
    if (csv) {
      for (std::size_t i = 0; i < band.temperatures.size(); ++i) {
        os << to_string(c.scheme) << ',' << c.n << ',' << format_number(c.tau) << ','
           << format_number(c.phi) << ',' << format_number(band.temperatures[i]) << ','
           << format_number(band.fi_min[i]) << ',' << format_number(band.fi_mean[i]) << ','
           << format_number(band.fi_max[i]) << '\n';
      }
    } else {
      ordered_json argmin = ordered_json::array();
      ordered_json argmax = ordered_json::array();
      for (std::size_t i = 0; i < band.temperatures.size(); ++i) {
        const auto& lo = band.argmin_state[i];
        const auto& hi = band.argmax_state[i];
        argmin.push_back({lo.rx, lo.ry, lo.rz});
        argmax.push_back({hi.rx, hi.ry, hi.rz});
      }
      out_curves.push_back({{"scheme", to_string(c.scheme)},
                            {"n", c.n},
                            {"tau", c.tau},
                            {"phi", c.phi},
                            {"T", band.temperatures},
                            {"fi_min", band.fi_min},
                            {"fi_mean", band.fi_mean},
                            {"fi_max", band.fi_max},
                            {"argmin_state", argmin},
                            {"argmax_state", argmax}});
    }
  }
  if (!csv) os << ordered_json{{"curves", out_curves}}.dump(2) << '\n';
  return {os.str(), common_parameters(cfg)};
}

Artifact bandwidth_table(const RunConfig& cfg, int n_max, double tau, double phi) {
  const bool csv = cfg.effective_format() == OutputFormat::Csv;
  const EnsembleSpec ens{cfg.samples, cfg.seed, cfg.include_poles};
  const BandWidthRatio r =
      bandwidth_ratio(n_max, tau, MeasurementFamily(phi), make_grid(cfg), ens, thread_count(cfg));
  std::ostringstream os;
  if (csv) {
    os << "n,tau,phi,T_peak,delta_sms,delta_iid,ratio\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i) {
      os << r.n_values[i] << ',' << format_number(tau) << ',' << format_number(phi) << ','
         << format_number(r.peak_temperature[i]) << ',' << format_number(r.delta_sms[i]) << ','
         << format_number(r.delta_iid[i]) << ',' << format_number(r.ratio[i]) << '\n';
    }
  } else {
    os << ordered_json{{"n", r.n_values},
                       {"tau", tau},
                       {"phi", phi},
                       {"T_peak", r.peak_temperature},
                       {"delta_sms", r.delta_sms},
                       {"delta_iid", r.delta_iid},
                       {"ratio", r.ratio}}
              .dump(2)
       << '\n';
  }
  ordered_json params = common_parameters(cfg);
  params["n_max"] = n_max;
  params["tau"] = tau;
  params["phi"] = phi;
  params["band_width_temperature"] = "peak of the IID ensemble-mean curve";
  return {os.str(), params};
}

Artifact trajectory_report(const RunConfig& cfg) {
  const BathParams bath(cfg.true_temperature, 1.0, cfg.omega_over_gamma);
  const ProtocolSpec spec{cfg.schemes.front(), cfg.n, cfg.tau, cfg.rho0.resolve(bath),
                          MeasurementFamily(cfg.phi)};
  const EstimationReport r = crb_report(spec, bath, cfg.trials, cfg.seed,
                                        PriorRange{cfg.prior_lo, cfg.prior_hi}, thread_count(cfg));
  std::ostringstream os;
  if (cfg.effective_format() == OutputFormat::Csv) {
    os << "scheme,n,tau,phi,true_T,trials,rmse,crb,ratio,median,boundary_hits,flat_records\n"
       << to_string(spec.scheme) << ',' << spec.n << ',' << format_number(spec.tau) << ','
       << format_number(cfg.phi) << ',' << format_number(r.true_temperature) << ',' << r.trials
       << ',' << format_number(r.rmse) << ',' << format_number(r.crb) << ','
       << format_number(r.ratio) << ',' << format_number(r.median) << ',' << r.boundary_hits
       << ',' << r.flat_records << '\n';
  } else {
    os << ordered_json{{"scheme", to_string(spec.scheme)},
                       {"n", spec.n},
                       {"tau", spec.tau},
                       {"phi", cfg.phi},
                       {"true_T", r.true_temperature},
                       {"trials", r.trials},
                       {"rmse", r.rmse},
                       {"crb", r.crb},
                       {"ratio", r.ratio},
                       {"fisher", r.fisher},
                       {"median", r.median},
                       {"boundary_hits", r.boundary_hits},
                       {"flat_records", r.flat_records},
                       {"estimates", r.estimates}}
              .dump(2)
       << '\n';
  }
  return {os.str(), common_parameters(cfg)};
}

Artifact run_preset(RunConfig cfg) {
  const auto both = [](int n, double tau, double phi) {
    return std::vector<CurveSpec>{{Scheme::IID, n, tau, phi}, {Scheme::SMS, n, tau, phi}};
  };
  cfg.schemes = {Scheme::IID, Scheme::SMS};
  Artifact a;
  switch (*cfg.preset) {
    case PresetId::Fig3:
      cfg.command = Subcommand::Bandwidth;
      a = bandwidth_table(cfg, 7, 4.0, 0.0);
      break;
    case PresetId::Fig4a:
      cfg.n = 3, cfg.tau = 4.0, cfg.phi = 0.0;
      a = ensemble_curves(cfg, both(3, 4.0, 0.0));
      break;
    case PresetId::Fig4b:
      cfg.n = 7, cfg.tau = 4.0, cfg.phi = 0.0;
      a = ensemble_curves(cfg, both(7, 4.0, 0.0));
      break;
    case PresetId::Fig4Collapse: {
      cfg.tau = 10.0, cfg.phi = 0.0;
      auto curves = both(3, 10.0, 0.0);
      const auto seven = both(7, 10.0, 0.0);
      curves.insert(curves.end(), seven.begin(), seven.end());
      a = ensemble_curves(cfg, curves);
      a.parameters["n"] = {3, 7};
      break;
    }
    case PresetId::Fig5Iid:
    case PresetId::Fig5Sms: {
      const Scheme scheme = *cfg.preset == PresetId::Fig5Iid ? Scheme::IID : Scheme::SMS;
      cfg.schemes = {scheme};
      cfg.n = 3, cfg.tau = 9.5;
      cfg.rho0 = InputState{};
      std::vector<CurveSpec> curves;
      const std::vector<double> phis{0.0, angle_pi_over(8), angle_pi_over(6),
                                     MeasurementFamily::kMaxPhi};
      for (double phi : phis) curves.push_back({scheme, 3, 9.5, phi});
      a = fi_curves(cfg, curves);
      a.parameters["phi"] = phis;
      break;
    }
    case PresetId::Fig6ShortTau:
      cfg.n = 3, cfg.tau = 2.0, cfg.phi = angle_pi_over(8);
      a = ensemble_curves(cfg, both(3, 2.0, angle_pi_over(8)));
      break;
  }
  a.parameters["subcommand"] = "preset";
  a.parameters["preset"] = to_string(*cfg.preset);
  return a;
}

Artifact produce(const RunConfig& cfg) {
  switch (cfg.command) {
    case Subcommand::FiCurve: {
      std::vector<CurveSpec> curves;
      for (auto s : cfg.schemes) curves.push_back({s, cfg.n, cfg.tau, cfg.phi});
      return fi_curves(cfg, curves);
    }
    case Subcommand::Ensemble: {
      std::vector<CurveSpec> curves;
      for (auto s : cfg.schemes) curves.push_back({s, cfg.n, cfg.tau, cfg.phi});
      return ensemble_curves(cfg, curves);
    }
    case Subcommand::Bandwidth:
      return bandwidth_table(cfg, cfg.n_max, cfg.tau, cfg.phi);
    case Subcommand::Trajectory:
      return trajectory_report(cfg);
    case Subcommand::Preset:
      return run_preset(cfg);
  }
  throw std::logic_error("unhandled subcommand");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

RunResult run(const RunConfig& config, std::string* stdout_text) {
  Artifact artifact;
  try {
    artifact = produce(config);
  } catch (const BudgetError& e) {
    return {1, std::string("compute budget exceeded: ") + e.what()};
  } catch (const DegenerateBandError& e) {
    return {1, e.what()};
  } catch (const std::domain_error& e) {
    return {1, e.what()};
  }

  if (config.out_path.empty()) {
    if (stdout_text) *stdout_text = artifact.body;
    return {0, {}};
  }

  const bool json = config.effective_format() == OutputFormat::Json;
  ordered_json meta;
  meta["tool"] = "thermo";
  meta["version"] = kToolVersion;
  meta["output"] = config.out_path;
  meta["format"] = json ? "json" : "csv";
  meta["threads"] = config.threads ? ordered_json(*config.threads) : ordered_json("auto");
  meta["parameters"] = artifact.parameters;
  try {
    write_file(config.out_path, artifact.body);
    write_file(config.out_path + ".meta.json", meta.dump(2) + "\n");
  } catch (const IoError& e) {
    return {3, e.what()};
  }
  return {0, {}};
}

int main_entry(int argc, const char* const* argv) {
  RunConfig cfg;
  try {
    cfg = parse(argc, argv);
  } catch (const InfoRequest& info) {
    std::cout << info.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  std::string text;
  const RunResult result = run(cfg, &text);
  if (result.exit_code != 0) {
    std::cerr << "error: " << result.message << '\n';
    return result.exit_code;
  }
  std::cout << text;
  return 0;
}

}  // namespace thermo::cli
