#include "thermo/fisher.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <array>
#include <limits>
#include <map>

namespace thermo {

std::string to_string(Scheme scheme) { return scheme == Scheme::IID ? "iid" : "sms"; }

Scheme parse_scheme(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "iid") return Scheme::IID;
  if (lower == "sms") return Scheme::SMS;
  throw std::invalid_argument("unknown scheme '" + text + "' (expected iid or sms)");
}

void ProtocolSpec::validate_fields() const {
  if (n < 1) throw std::domain_error("number of measurements n must be >= 1");
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::domain_error("interval tau must be non-negative and finite");
  }
  if (!rho0.is_physical()) throw std::domain_error("input state is not a valid density matrix");
}

void ProtocolSpec::validate() const {
  validate_fields();
  if (n > kMaxEnumeratedMeasurements) {
    throw BudgetError("n = " + std::to_string(n) + " exceeds the enumeration budget of " +
                      std::to_string(kMaxEnumeratedMeasurements) + " measurements");
  }
}

namespace {

FIResult make_result(Scheme scheme, int n, double tau, const MeasurementFamily& family,
                     const BathParams& bath) {
  FIResult r;
  r.scheme = scheme;
  r.n = n;
  r.tau = tau;
  r.phi = family.phi();
  r.temperature = bath.temperature();
  return r;
}

}  // namespace

FIResult fi_single(const QubitState& rho0, const BathParams& bath, double tau,
                   const MeasurementFamily& family) {
  FIResult result = make_result(Scheme::IID, 1, tau, family, bath);
  result.strings_enumerated = 2;
  const auto evolved = evolve_tangent(rho0, StateTangent{}, bath, tau);
  const double c = family.cos2phi();
  if (c == 0.0) return result;

  const double rc = evolved.state.rz * c;
  const double slope = c * evolved.tangent.drz;
  const double denom = (1.0 - rc) * (1.0 + rc);
  if (!(denom > 0.0)) {
    if (slope != 0.0) {
      result.value = std::numeric_limits<double>::infinity();
      result.divergent = true;
    }
    return result;
  }
  result.value = slope * slope / denom;
  return result;
}

FIResult fi_iid(const ProtocolSpec& spec, const BathParams& bath) {
  spec.validate();
  FIResult single = fi_single(spec.rho0, bath, spec.tau, spec.family);
  FIResult result = make_result(Scheme::IID, spec.n, spec.tau, spec.family, bath);
  result.value = static_cast<double>(spec.n) * single.value;
  result.divergent = single.divergent;
  result.strings_enumerated = 2;
  return result;
}

namespace {

struct SmsAccumulator {
  const MeasurementFamily& family;
  const BathParams& bath;
  double tau;
  int n;
  double sum = 0.0;
  std::uint64_t strings = 0;
  bool divergent = false;

  void descend(const WeightedState& branch, const StateTangent& tangent, int depth) {
    const auto evolved = evolve_tangent(branch.state, tangent, bath, tau);
    const WeightedState before{evolved.state, branch.weight, false};
    for (Outcome s : {Outcome::Plus, Outcome::Minus}) {
      const auto next = apply_tangent(family, before, evolved.tangent, s);
      if (next.branch.impossible || next.branch.weight < kBranchWeightFloor) {
        if (next.branch.impossible && next.tangent.dweight != 0.0) divergent = true;
        continue;
      }
      if (depth + 1 == n) {
        const double dw = next.tangent.dweight;
        sum += dw * dw / next.branch.weight;
        ++strings;
      } else {
        descend(next.branch, next.tangent, depth + 1);
      }
    }
  }
};

}  // namespace

FIResult fi_sms(const ProtocolSpec& spec, const BathParams& bath) {
  spec.validate();
  FIResult result = make_result(Scheme::SMS, spec.n, spec.tau, spec.family, bath);
  if (spec.family.cos2phi() == 0.0) {
    // Every string has probability 2^-n independent of T.
    result.strings_enumerated = std::uint64_t{1} << spec.n;
    return result;
  }
  SmsAccumulator acc{spec.family, bath, spec.tau, spec.n};
  acc.descend(WeightedState{spec.rho0, 1.0, false}, StateTangent{}, 0);
  result.value = acc.divergent ? std::numeric_limits<double>::infinity() : acc.sum;
  result.divergent = acc.divergent;
  result.strings_enumerated = acc.strings;
  return result;
}

FIResult fi_sms_merged(const ProtocolSpec& spec, const BathParams& bath) {
  spec.validate_fields();
  FIResult result = make_result(Scheme::SMS, spec.n, spec.tau, spec.family, bath);
  if (spec.family.cos2phi() == 0.0) return result;

  // Key: normalized state and its tangent, bitwise. Value: branch mass.
  using Key = std::array<double, 6>;
  const std::size_t max_atoms = std::size_t{1} << kMaxEnumeratedMeasurements;
  std::map<Key, double> atoms;
  atoms[Key{spec.rho0.rx, spec.rho0.ry, spec.rho0.rz, 0.0, 0.0, 0.0}] = 1.0;

  for (int step = 0; step < spec.n; ++step) {
    std::map<Key, double> next_atoms;
    const bool last = step + 1 == spec.n;
    for (const auto& [key, mass] : atoms) {
      const QubitState state{key[0], key[1], key[2]};
      const StateTangent tangent{key[3], key[4], key[5], 0.0};
      const auto evolved = evolve_tangent(state, tangent, bath, spec.tau);
      for (Outcome s : {Outcome::Plus, Outcome::Minus}) {
        const auto next =
            apply_tangent(spec.family, WeightedState{evolved.state, 1.0, false}, evolved.tangent, s);
        const double p = next.branch.weight;
        const double dp = next.tangent.dweight;
        if (next.branch.impossible || mass * p < kBranchWeightFloor) {
          if (next.branch.impossible && dp != 0.0) result.divergent = true;
          continue;
        }
        result.value += mass * dp * dp / p;
        if (!last) {
          const QubitState& r = next.branch.state;
          const StateTangent& t = next.tangent;
          next_atoms[Key{r.rx, r.ry, r.rz, t.drx, t.dry, t.drz}] += mass * p;
        }
      }
    }
    if (next_atoms.size() > max_atoms) {
      throw BudgetError("sequential branch count exceeds the enumeration budget");
    }
    result.strings_enumerated += 2 * atoms.size();
    atoms = std::move(next_atoms);
  }
  if (result.divergent) result.value = std::numeric_limits<double>::infinity();
  return result;
}

FIResult fisher_information(const ProtocolSpec& spec, const BathParams& bath) {
  return spec.scheme == Scheme::IID ? fi_iid(spec, bath) : fi_sms(spec, bath);
}

namespace {

void check_length(const ProtocolSpec& spec, std::span<const Outcome> outcomes) {
  if (outcomes.size() != static_cast<std::size_t>(spec.n)) {
    throw std::invalid_argument("outcome string length " + std::to_string(outcomes.size()) +
                                " does not match n = " + std::to_string(spec.n));
  }
}

StringProbability sms_with_derivative(const ProtocolSpec& spec, const BathParams& bath,
                                      std::span<const Outcome> outcomes) {
  WeightedState branch{spec.rho0, 1.0, false};
  StateTangent tangent{};
  for (Outcome s : outcomes) {
    const auto evolved = evolve_tangent(branch.state, tangent, bath, spec.tau);
    const auto next =
        apply_tangent(spec.family, WeightedState{evolved.state, branch.weight, false},
                      evolved.tangent, s);
    if (next.branch.impossible) return {0.0, next.tangent.dweight};
    branch = next.branch;
    tangent = next.tangent;
  }
  return {branch.weight, tangent.dweight};
}

StringProbability iid_with_derivative(const ProtocolSpec& spec, const BathParams& bath,
                                      std::span<const Outcome> outcomes) {
  const auto evolved = evolve_tangent(spec.rho0, StateTangent{}, bath, spec.tau);
  const auto probs = probability(spec.family, evolved.state);
  const double dplus = 0.5 * spec.family.cos2phi() * evolved.tangent.drz;
  double p = 1.0;
  double dp = 0.0;
  for (Outcome s : outcomes) {
    const double ps = probs[s];
    const double dps = s == Outcome::Plus ? dplus : -dplus;
    dp = dp * ps + p * dps;
    p *= ps;
  }
  return {p, dp};
}

}  // namespace

double sms_string_probability(const ProtocolSpec& spec, const BathParams& bath,
                              std::span<const Outcome> outcomes) {
  spec.validate_fields();
  check_length(spec, outcomes);
  WeightedState branch{spec.rho0, 1.0, false};
  for (Outcome s : outcomes) {
    branch = apply(spec.family, WeightedState{evolve(branch.state, bath, spec.tau),
                                              branch.weight, false},
                   s);
    if (branch.impossible) return 0.0;
  }
  return branch.weight;
}

double iid_string_probability(const ProtocolSpec& spec, const BathParams& bath,
                              std::span<const Outcome> outcomes) {
  spec.validate_fields();
  check_length(spec, outcomes);
  const auto probs = probability(spec.family, evolve(spec.rho0, bath, spec.tau));
  double p = 1.0;
  for (Outcome s : outcomes) p *= probs[s];
  return p;
}

double string_probability(const ProtocolSpec& spec, const BathParams& bath,
                          std::span<const Outcome> outcomes) {
  return spec.scheme == Scheme::IID ? iid_string_probability(spec, bath, outcomes)
                                    : sms_string_probability(spec, bath, outcomes);
}

StringProbability string_probability_with_derivative(const ProtocolSpec& spec,
                                                     const BathParams& bath,
                                                     std::span<const Outcome> outcomes) {
  spec.validate_fields();
  check_length(spec, outcomes);
  return spec.scheme == Scheme::IID ? iid_with_derivative(spec, bath, outcomes)
                                    : sms_with_derivative(spec, bath, outcomes);
}

std::vector<Outcome> outcome_string(std::uint64_t index, int n) {
  std::vector<Outcome> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = (index >> j) & 1U ? Outcome::Minus : Outcome::Plus;
  }
  return out;
}

FIResult qfi_diagonal(const QubitState& rho0, const BathParams& bath, double tau) {
  const auto evolved = evolve_tangent(rho0, StateTangent{}, bath, tau);
  if (std::abs(evolved.state.rx) > 1e-12 || std::abs(evolved.state.ry) > 1e-12) {
    throw std::domain_error("evolved state carries energy-basis coherences");
  }
  FIResult result = make_result(Scheme::IID, 1, tau, MeasurementFamily::projective(), bath);
  result.strings_enumerated = 2;
  const double rz = evolved.state.rz;
  const double drz = evolved.tangent.drz;
  // Populations (1 +/- r_z)/2 with derivatives +/- dr_z/2.
  for (double p : {0.5 * (1.0 + rz), 0.5 * (1.0 - rz)}) {
    if (p > 0.0) {
      result.value += 0.25 * drz * drz / p;
    } else if (drz != 0.0) {
      result.value = std::numeric_limits<double>::infinity();
      result.divergent = true;
      return result;
    }
  }
  return result;
}

}  // namespace thermo
