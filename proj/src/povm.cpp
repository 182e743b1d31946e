#include "thermo/povm.hpp"

#include <cmath>
#include <stdexcept>

namespace thermo {

MeasurementFamily::MeasurementFamily(double phi) : phi_(phi) {
  if (!(phi >= 0.0 && phi <= kMaxPhi)) {
    throw std::domain_error("measurement angle phi must lie in [0, pi/4]");
  }
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  cos2_ = c * c;
  sin2_ = s * s;
  cs_ = c * s;
  // cos(2 phi) evaluated directly: at phi = pi/4 this is ~6e-17, not 0.
  cos2phi_ = phi == kMaxPhi ? 0.0 : std::cos(2.0 * phi);
}

std::array<double, 2> MeasurementFamily::population_scale(Outcome s) const {
  return s == Outcome::Plus ? std::array<double, 2>{cos2_, sin2_}
                            : std::array<double, 2>{sin2_, cos2_};
}

OutcomeProbabilities probability(const MeasurementFamily& family, const QubitState& state) {
  const double plus = 0.5 * (1.0 + state.rz * family.cos2phi());
  return {plus, 1.0 - plus};
}

namespace {

struct Jump {
  double p;         // P(s|rho)
  double z_num;     // unnormalized r_z of the branch
  double dp;        // dP/dT
  double dz_num;    // d z_num / dT
};

Jump jump_populations(const MeasurementFamily& family, const QubitState& state, double drz,
                      Outcome s) {
  const auto [a, b] = family.population_scale(s);
  const double pe = 0.5 * (1.0 + state.rz);
  const double pg = 0.5 * (1.0 - state.rz);
  const double p = s == Outcome::Plus ? probability(family, state).plus
                                      : probability(family, state).minus;
  // a + b = 1 and a - b = s cos(2 phi), so d z_num = dr_z / 2 and
  // dP = s cos(2 phi) dr_z / 2.
  const double contrast = s == Outcome::Plus ? family.cos2phi() : -family.cos2phi();
  return {p, a * pe - b * pg, 0.5 * contrast * drz, 0.5 * drz};
}

}  // namespace

WeightedState apply(const MeasurementFamily& family, const QubitState& state, Outcome s) {
  return apply(family, WeightedState{state, 1.0, false}, s);
}

WeightedState apply(const MeasurementFamily& family, const WeightedState& in, Outcome s) {
  return apply_tangent(family, in, StateTangent{}, s).branch;
}

BranchWithTangent apply_tangent(const MeasurementFamily& family, const WeightedState& in,
                                const StateTangent& tangent, Outcome s) {
  const QubitState& r = in.state;
  const Jump j = jump_populations(family, r, tangent.drz, s);

  BranchWithTangent out;
  if (in.impossible || !(j.p > 0.0)) {
    out.branch = WeightedState{r, 0.0, true};
    return out;
  }

  const double inv_p = 1.0 / j.p;
  const double cs = family.coherence_scale();
  out.branch.state.rx = cs * r.rx * inv_p;
  out.branch.state.ry = cs * r.ry * inv_p;
  out.branch.state.rz = j.z_num * inv_p;
  out.branch.weight = in.weight * j.p;
  out.branch.impossible = false;

  const double inv_p2 = inv_p * inv_p;
  out.tangent.drx = cs * (tangent.drx * j.p - r.rx * j.dp) * inv_p2;
  out.tangent.dry = cs * (tangent.dry * j.p - r.ry * j.dp) * inv_p2;
  out.tangent.drz = (j.dz_num * j.p - j.z_num * j.dp) * inv_p2;
  out.tangent.dweight = tangent.dweight * j.p + in.weight * j.dp;
  return out;
}

}  // namespace thermo
