#include "thermo/bloch.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thermo {

double QubitState::norm() const { return std::sqrt(norm_squared()); }

QubitState make_state(double rx, double ry, double rz) {
  QubitState s{rx, ry, rz};
  if (!std::isfinite(rx) || !std::isfinite(ry) || !std::isfinite(rz) || !s.is_physical()) {
    throw std::domain_error("Bloch vector norm " + std::to_string(s.norm()) + " exceeds 1");
  }
  return s;
}

BathParams::BathParams(double temperature, double gamma, double omega_over_gamma)
    : temperature_(temperature), gamma_(gamma), omega_over_gamma_(omega_over_gamma) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::domain_error("temperature must be positive and finite");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("coupling gamma must be positive and finite");
  }
  polarization_ = std::tanh(0.5 / temperature_);
}

double BathParams::thermal_occupation() const {
  // expm1 overflows to +inf for large beta, giving the correct limit 0.
  return 1.0 / std::expm1(beta());
}

double BathParams::gamma_plus() const { return (1.0 + thermal_occupation()) * gamma_; }

double BathParams::gamma_minus() const { return thermal_occupation() * gamma_; }

double BathParams::dpolarization_dT() const {
  // d/dT = -beta^2 d/dbeta and d tanh(x)/dx = sech^2(x).
  const double half_beta = 0.5 * beta();
  const double sech = half_beta > 350.0 ? 0.0 : 1.0 / std::cosh(half_beta);
  return -0.5 * beta() * beta() * sech * sech;
}

double BathParams::dtotal_rate_dT() const {
  return -gamma_ * dpolarization_dT() / (polarization_ * polarization_);
}

QubitState thermal_state(const BathParams& bath) { return {0.0, 0.0, -bath.polarization()}; }

namespace {

void check_duration(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("evolution time must be non-negative and finite");
  }
}

}  // namespace

QubitState evolve(const QubitState& state, const BathParams& bath, double t) {
  check_duration(t);
  if (t == 0.0) return state;
  const double rate = bath.total_rate();
  const double decay = std::exp(-rate * t);
  const double coherence = std::exp(-0.5 * rate * t);
  const double angle = bath.omega() * t;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  QubitState out;
  out.rx = coherence * (c * state.rx - s * state.ry);
  out.ry = coherence * (s * state.rx + c * state.ry);
  out.rz = decay * state.rz - (-std::expm1(-rate * t)) * bath.polarization();
  return out;
}

StateWithTangent evolve_tangent(const QubitState& state, const StateTangent& tangent,
                                const BathParams& bath, double t) {
  check_duration(t);
  if (t == 0.0) return {state, tangent};

  const double rate = bath.total_rate();
  const double drate = bath.dtotal_rate_dT();
  const double h = bath.polarization();
  const double dh = bath.dpolarization_dT();

  const double decay = std::exp(-rate * t);
  const double ddecay = -t * drate * decay;
  const double coherence = std::exp(-0.5 * rate * t);
  const double dcoherence = -0.5 * t * drate * coherence;
  const double angle = bath.omega() * t;
  const double c = std::cos(angle);
  const double s = std::sin(angle);

  const double rot_x = c * state.rx - s * state.ry;
  const double rot_y = s * state.rx + c * state.ry;
  const double drot_x = c * tangent.drx - s * tangent.dry;
  const double drot_y = s * tangent.drx + c * tangent.dry;

  StateWithTangent out;
  out.state.rx = coherence * rot_x;
  out.state.ry = coherence * rot_y;
  out.state.rz = decay * state.rz - (-std::expm1(-rate * t)) * h;

  out.tangent.drx = dcoherence * rot_x + coherence * drot_x;
  out.tangent.dry = dcoherence * rot_y + coherence * drot_y;
  out.tangent.drz = ddecay * (state.rz + h) + decay * tangent.drz + std::expm1(-rate * t) * dh;
  out.tangent.dweight = tangent.dweight;
  return out;
}

}  // namespace thermo
