// Qubit probe thermalizing in a bosonic bath, in Bloch-vector form.
//
// Temperatures are measured in units of hbar*Omega/k_B, so beta = 1/T.
// Times are absolute; the products gamma*t are what enter the dynamics.

#pragma once

#include <array>

namespace thermo {

/// rho = (1 + r . sigma) / 2. The trace is fixed to one by the representation.
struct QubitState {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  static QubitState ground() { return {0.0, 0.0, -1.0}; }
  static QubitState excited() { return {0.0, 0.0, 1.0}; }
  static QubitState maximally_mixed() { return {0.0, 0.0, 0.0}; }

  double norm_squared() const { return rx * rx + ry * ry + rz * rz; }
  double norm() const;
  /// Tr(rho^2).
  double purity() const { return 0.5 * (1.0 + norm_squared()); }
  bool is_physical(double tol = 1e-12) const { return norm_squared() <= 1.0 + tol; }

  friend bool operator==(const QubitState&, const QubitState&) = default;
};

/// Throws std::domain_error unless |r| <= 1 (+1e-12).
QubitState make_state(double rx, double ry, double rz);

/// Partial derivatives with respect to the bath temperature T.
struct StateTangent {
  double drx = 0.0;
  double dry = 0.0;
  double drz = 0.0;
  double dweight = 0.0;
};

/// A (possibly unnormalized) measurement branch: `state` is the normalized
/// post-measurement state and `weight` the trace of the branch before
/// normalization. `impossible` marks a zero-probability branch whose
/// `state` carries no meaning.
struct WeightedState {
  QubitState state;
  double weight = 1.0;
  bool impossible = false;
};

class BathParams {
 public:
  /// Throws std::domain_error unless temperature > 0 and gamma > 0.
  explicit BathParams(double temperature, double gamma = 1.0, double omega_over_gamma = 0.0);

  double temperature() const { return temperature_; }
  double gamma() const { return gamma_; }
  double omega_over_gamma() const { return omega_over_gamma_; }
  double omega() const { return omega_over_gamma_ * gamma_; }

  double beta() const { return 1.0 / temperature_; }
  /// Mean occupation 1/(e^beta - 1).
  double thermal_occupation() const;
  double gamma_plus() const;   // decay
  double gamma_minus() const;  // excitation
  /// tanh(beta/2); the thermal state has r_z = -tanh(beta/2).
  double polarization() const { return polarization_; }
  /// Total relaxation rate gamma * coth(beta/2).
  double total_rate() const { return gamma_ / polarization_; }

  /// d tanh(beta/2) / dT.
  double dpolarization_dT() const;
  /// d Gamma / dT.
  double dtotal_rate_dT() const;

  BathParams with_temperature(double temperature) const {
    return BathParams(temperature, gamma_, omega_over_gamma_);
  }

 private:
  double temperature_;
  double gamma_;
  double omega_over_gamma_;
  double polarization_;
};

QubitState thermal_state(const BathParams& bath);

/// Exact solution of the thermalizing master equation after time t.
QubitState evolve(const QubitState& state, const BathParams& bath, double t);

struct StateWithTangent {
  QubitState state;
  StateTangent tangent;
};

/// Propagates the state together with its temperature derivative. The
/// tangent picks up both the explicit T-dependence of the channel and the
/// carried-in derivative of the input; `dweight` passes through unchanged
/// because the channel is trace preserving.
StateWithTangent evolve_tangent(const QubitState& state, const StateTangent& tangent,
                                const BathParams& bath, double t);

}  // namespace thermo
