#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace thermo;
using namespace thermo::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse_args(std::vector<std::string> args) {
  args.insert(args.begin(), "thermo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse(static_cast<int>(argv.size()), argv.data());
}

std::string usage_message(std::vector<std::string> args) {
  try {
    parse_args(std::move(args));
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string field; std::getline(in, field, ',');) out.push_back(field);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("thermo_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int exit_status(const std::string& args) {
  const std::string cmd = std::string(THERMO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse happy path") {
  const auto cfg = parse_args({"fi-curve", "--scheme", "sms", "--n", "3", "--tau", "4", "--phi", "0",
                               "--rho0", "ground", "--T-min", "0.05", "--T-max", "3",
                               "--T-steps", "200"});
  CHECK(cfg.command == Subcommand::FiCurve);
  REQUIRE(cfg.schemes.size() == 1);
  CHECK(cfg.schemes[0] == Scheme::SMS);
  CHECK(cfg.n == 3);
  CHECK(cfg.tau == 4.0);
  CHECK(cfg.phi == 0.0);
  CHECK(cfg.rho0.kind == InputState::Kind::Ground);
  CHECK(cfg.t_min == 0.05);
  CHECK(cfg.t_max == 3.0);
  CHECK(cfg.t_steps == 200);
  CHECK(cfg.effective_format() == OutputFormat::Csv);
}

TEST_CASE("parse details") {
  CHECK(parse_args({"fi-curve", "--phi", "pi/8"}).phi == doctest::Approx(std::numbers::pi / 8));
  CHECK(parse_args({"fi-curve", "--phi", "pi/4"}).phi == MeasurementFamily::kMaxPhi);
  CHECK(parse_args({"ensemble"}).schemes.size() == 2);
  CHECK(parse_args({"trajectory"}).effective_format() == OutputFormat::Json);
  CHECK(parse_args({"fi-curve", "--out", "x.json"}).effective_format() == OutputFormat::Json);
  CHECK(parse_args({"preset", "fig4a"}).preset == PresetId::Fig4a);
  CHECK(parse_args({"fi-curve", "--threads", "3"}).threads == 3u);

  const auto custom = parse_args({"fi-curve", "--rho0", "0.1,-0.2,0.3"});
  CHECK(custom.rho0.kind == InputState::Kind::Vector);
  CHECK(custom.rho0.vector.ry == -0.2);
  CHECK(custom.rho0.label() == "0.1;-0.2;0.3");
}

TEST_CASE("parse errors") {
  const std::string phi = usage_message({"fi-curve", "--phi", "1.0"});
  CHECK(phi.find("[0, pi/4]") != std::string::npos);

  const std::string norm = usage_message({"fi-curve", "--rho0", "0,0,-2"});
  CHECK(norm.find("Bloch norm") != std::string::npos);

  // One line per problem.
  const std::string several = usage_message({"fi-curve", "--phi", "2", "--n", "0", "--T-steps", "1"});
  int lines = 0;
  for (char c : several) lines += c == '\n';
  CHECK(lines + 1 >= 3);

  CHECK_FALSE(usage_message({"trajectory", "--scheme", "both"}).empty());
  CHECK_FALSE(usage_message({"preset", "fig9"}).empty());
  CHECK_FALSE(usage_message({"fi-curve", "--bogus", "1"}).empty());
  CHECK_FALSE(usage_message({"fi-curve", "--T-min", "2", "--T-max", "1"}).empty());
  CHECK_FALSE(usage_message({}).empty());
}

TEST_CASE("config file") {
  TempDir dir;
  const fs::path conf = dir.path / "run.conf";
  std::ofstream(conf) << "n=5\ntau=2.5\nphi=pi/8\nrho0=excited\n";

  const auto cfg = parse_args({"fi-curve", "--config", conf.string(), "--n", "4"});
  CHECK(cfg.n == 4);  // flag wins over file
  CHECK(cfg.tau == 2.5);
  CHECK(cfg.phi == doctest::Approx(std::numbers::pi / 8));
  CHECK(cfg.rho0.kind == InputState::Kind::Excited);

  const fs::path bad = dir.path / "bad.conf";
  std::ofstream(bad) << "n=5\nunknown-key=1\n";
  CHECK_FALSE(usage_message({"fi-curve", "--config", bad.string()}).empty());
}

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(12345678.9) == "12345678.9");
  CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("fi-curve output file") {
  TempDir dir;
  const fs::path out = dir.path / "curve.csv";
  auto cfg = parse_args({"fi-curve", "--scheme", "both", "--n", "3", "--tau", "4", "--rho0",
                         "0.1,0,-0.5", "--T-steps", "20", "--out", out.string()});
  REQUIRE(run(cfg).exit_code == 0);

  const std::string text = read_file(out);
  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 41);
  CHECK(lines[0] == "scheme,n,tau,phi,T,rho0,FI");
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  for (const auto& line : lines) {
    CHECK_FALSE(line.empty());
    CHECK(line.back() != ' ');
    CHECK(split(line).size() == 7);
  }
  const auto row = split(lines[5]);
  CHECK(row[0] == "iid");
  CHECK(row[5] == "0.1;0;-0.5");
  const double T = std::stod(row[4]);
  const ProtocolSpec spec{Scheme::IID, 3, 4.0, make_state(0.1, 0.0, -0.5), MeasurementFamily(0.0)};
  CHECK(row[6] == format_number(fi_iid(spec, BathParams(T)).value));
  CHECK(split(lines[21])[0] == "sms");

  const auto meta = nlohmann::json::parse(read_file(out.string() + ".meta.json"));
  CHECK(meta["tool"] == "thermo");
  CHECK(meta["version"] == kToolVersion);
  CHECK(meta["format"] == "csv");
  CHECK(meta["parameters"]["n"] == 3);

  // Reruns are byte-identical, including the sidecar.
  const std::string first_meta = read_file(out.string() + ".meta.json");
  REQUIRE(run(cfg).exit_code == 0);
  CHECK(read_file(out) == text);
  CHECK(read_file(out.string() + ".meta.json") == first_meta);

  // Thread count changes only the sidecar.
  cfg.threads = 2;
  REQUIRE(run(cfg).exit_code == 0);
  CHECK(read_file(out) == text);
}

TEST_CASE("ensemble and presets") {
  SUBCASE("fig4a has min/mean/max for both schemes") {
    std::string text;
    const auto cfg = parse_args({"preset", "fig4a", "--samples", "20", "--T-steps", "10"});
    REQUIRE(run(cfg, &text).exit_code == 0);
    const auto lines = lines_of(text);
    REQUIRE(lines.size() == 21);
    CHECK(lines[0] == "scheme,n,tau,phi,T,fi_min,fi_mean,fi_max");
    CHECK(split(lines[1])[0] == "iid");
    CHECK(split(lines[11])[0] == "sms");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split(lines[i]);
      CHECK(f[1] == "3");
      CHECK(f[2] == "4");
      CHECK(f[3] == "0");
      CHECK(std::stod(f[5]) <= std::stod(f[6]));
      CHECK(std::stod(f[6]) <= std::stod(f[7]));
    }
  }

  SUBCASE("bandwidth gives 7 decreasing rows") {
    std::string text;
    const auto cfg = parse_args({"bandwidth", "--n-max", "7", "--samples", "50", "--T-steps", "30"});
    REQUIRE(run(cfg, &text).exit_code == 0);
    const auto lines = lines_of(text);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "n,tau,phi,T_peak,delta_sms,delta_iid,ratio");
    double previous = INFINITY;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const double ratio = std::stod(split(lines[i])[6]);
      CHECK(ratio < previous);
      previous = ratio;
    }
  }

  SUBCASE("fig5 writes four sharpness curves") {
    std::string text;
    REQUIRE(run(parse_args({"preset", "fig5-sms", "--T-steps", "5"}), &text).exit_code == 0);
    CHECK(lines_of(text).size() == 21);
  }

  SUBCASE("ensemble JSON") {
    std::string text;
    const auto cfg = parse_args({"ensemble", "--samples", "5", "--T-steps", "4", "--format", "json"});
    REQUIRE(run(cfg, &text).exit_code == 0);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["curves"].size() == 2);
  }
}

TEST_CASE("trajectory report") {
  std::string text;
  const auto cfg = parse_args({"trajectory", "--scheme", "sms", "--n", "32", "--true-T", "1",
                               "--trials", "200", "--seed", "7", "--tau", "1"});
  REQUIRE(run(cfg, &text).exit_code == 0);
  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"rmse", "crb", "ratio", "fisher", "median", "estimates"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["estimates"].size() == 200);
  CHECK(j["crb"].get<double>() > 0.0);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(exit_status("fi-curve --T-steps 3") == 0);
  CHECK(exit_status("--version") == 0);
  CHECK(exit_status("fi-curve --phi 1.0") == 2);
  CHECK(exit_status("fi-curve --rho0 0,0,-2") == 2);
  CHECK(exit_status("fi-curve --scheme sms --n 30 --T-steps 3") == 1);
  CHECK(exit_status("bandwidth --phi pi/4 --samples 3 --T-steps 3") == 1);
  CHECK(exit_status("fi-curve --T-steps 3 --out " + (dir.path / "missing" / "x.csv").string()) == 3);
}
