// Two-outcome noisy population measurement.
//
//   M_+ = cos(phi) P_+ + sin(phi) P_-,   M_- = sin(phi) P_+ + cos(phi) P_-
//
// where P_+ (P_-) projects on the excited (ground) level. phi = 0 is the
// projective energy measurement, phi = pi/4 the uninformative one.

#pragma once

#include <array>
#include <numbers>

#include "thermo/bloch.hpp"

namespace thermo {

enum class Outcome : int { Minus = -1, Plus = +1 };

inline int sign(Outcome s) { return static_cast<int>(s); }
inline Outcome outcome_from_sign(int s) { return s > 0 ? Outcome::Plus : Outcome::Minus; }

class MeasurementFamily {
 public:
  static constexpr double kMaxPhi = std::numbers::pi / 4.0;

  /// Throws std::domain_error unless 0 <= phi <= pi/4.
  explicit MeasurementFamily(double phi = 0.0);

  static MeasurementFamily projective() { return MeasurementFamily(0.0); }

  double phi() const { return phi_; }
  double cos2phi() const { return cos2phi_; }

  /// Population scale factors (excited, ground) applied by M_s M_s^dagger.
  std::array<double, 2> population_scale(Outcome s) const;
  /// cos(phi) sin(phi), the scale applied to coherences by either outcome.
  double coherence_scale() const { return cs_; }

  /// The POVM effect E_s = M_s^dagger M_s, diagonal: (excited, ground).
  std::array<double, 2> effect(Outcome s) const { return population_scale(s); }

 private:
  double phi_;
  double cos2_;  // cos^2 phi
  double sin2_;  // sin^2 phi
  double cs_;
  double cos2phi_;
};

/// Outcome probabilities, index 0 is s = +1 and index 1 is s = -1.
struct OutcomeProbabilities {
  double plus = 0.5;
  double minus = 0.5;
  double operator[](Outcome s) const { return s == Outcome::Plus ? plus : minus; }
};

OutcomeProbabilities probability(const MeasurementFamily& family, const QubitState& state);

/// Normalized post-measurement state with weight P(s|rho).
WeightedState apply(const MeasurementFamily& family, const QubitState& state, Outcome s);

/// Same map applied to an already weighted branch: the returned weight is
/// in.weight * P(s|in.state).
WeightedState apply(const MeasurementFamily& family, const WeightedState& in, Outcome s);

struct BranchWithTangent {
  WeightedState branch;
  StateTangent tangent;
};

/// Propagates the temperature tangent through the jump. `tangent.dweight`
/// is the derivative of `in.weight`; the output derivative follows the
/// product rule for in.weight * P(s|rho).
BranchWithTangent apply_tangent(const MeasurementFamily& family, const WeightedState& in,
                                const StateTangent& tangent, Outcome s);

}  // namespace thermo
