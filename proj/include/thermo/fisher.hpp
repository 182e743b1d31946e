// Fisher information of temperature estimation for the measure-and-reprepare
// (IID) and sequential (SMS) protocols.
//
// IID: the probe is reset to rho0 before each of the n rounds, so the n
// outcomes are independent and the information is n times that of one round.
// SMS: one probe is thermalized for tau and measured, n times in a row; the
// string probabilities are obtained by enumerating all 2^n outcome strings
// while carrying the state and its analytic T-derivative along each path.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/bloch.hpp"
#include "thermo/povm.hpp"

namespace thermo {

enum class Scheme { IID, SMS };

std::string to_string(Scheme scheme);
/// Accepts "iid" / "sms" (any case). Throws std::invalid_argument otherwise.
Scheme parse_scheme(const std::string& text);

/// Largest number of measurements for which SMS strings are enumerated.
inline constexpr int kMaxEnumeratedMeasurements = 24;
/// Paths whose accumulated weight falls below this are dropped.
inline constexpr double kBranchWeightFloor = 1e-300;

/// Thrown when a protocol asks for more than kMaxEnumeratedMeasurements.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct ProtocolSpec {
  Scheme scheme = Scheme::SMS;
  int n = 1;
  double tau = 1.0;
  QubitState rho0 = QubitState::ground();
  MeasurementFamily family{};

  /// Throws std::domain_error on invalid fields. Any n >= 1 is accepted.
  void validate_fields() const;
  /// validate_fields() plus the enumeration budget n <= kMaxEnumeratedMeasurements
  /// (throws BudgetError).
  void validate() const;
};

struct FIResult {
  double value = 0.0;
  Scheme scheme = Scheme::IID;
  int n = 1;
  double tau = 0.0;
  double phi = 0.0;
  double temperature = 0.0;
  std::uint64_t strings_enumerated = 0;
  /// Set when the single-shot distribution is certain (P = 0 or 1) while its
  /// T-derivative is nonzero; `value` is then +infinity.
  bool divergent = false;
};

/// Fisher information of one measurement on rho(tau) = e^{tau L} rho0.
FIResult fi_single(const QubitState& rho0, const BathParams& bath, double tau,
                   const MeasurementFamily& family);

FIResult fi_iid(const ProtocolSpec& spec, const BathParams& bath);

FIResult fi_sms(const ProtocolSpec& spec, const BathParams& bath);

/// SMS Fisher information as a sum over steps of the conditional one-step
/// information, averaged over the branch distribution. Branches that reach an
/// identical (state, tangent) pair are merged, so projective measurements
/// (every branch collapses onto an energy eigenstate) cost O(n) and any n is
/// allowed. Throws BudgetError if more than 2^kMaxEnumeratedMeasurements
/// distinct branches would be live at once.
FIResult fi_sms_merged(const ProtocolSpec& spec, const BathParams& bath);

/// Dispatches on spec.scheme.
FIResult fisher_information(const ProtocolSpec& spec, const BathParams& bath);

/// Probability of an SMS outcome string via sequential normalized updates.
/// Throws std::invalid_argument if outcomes.size() != spec.n.
double sms_string_probability(const ProtocolSpec& spec, const BathParams& bath,
                              std::span<const Outcome> outcomes);

/// Product distribution of the IID protocol for one string.
double iid_string_probability(const ProtocolSpec& spec, const BathParams& bath,
                              std::span<const Outcome> outcomes);

/// Probability of a string under spec.scheme.
double string_probability(const ProtocolSpec& spec, const BathParams& bath,
                          std::span<const Outcome> outcomes);

struct StringProbability {
  double p = 0.0;
  double dp_dT = 0.0;
};

/// Probability and analytic temperature derivative of one string.
StringProbability string_probability_with_derivative(const ProtocolSpec& spec,
                                                     const BathParams& bath,
                                                     std::span<const Outcome> outcomes);

/// Outcome string number `index` of length n: bit j set means s_{j+1} = -1.
std::vector<Outcome> outcome_string(std::uint64_t index, int n);

/// Quantum Fisher information of rho(tau) when it is diagonal in the energy
/// basis. Throws std::domain_error if the evolved state has coherences.
FIResult qfi_diagonal(const QubitState& rho0, const BathParams& bath, double tau);

}  // namespace thermo
