// Random input states and ensemble statistics of Fisher-information curves.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "thermo/bloch.hpp"
#include "thermo/fisher.hpp"
#include "thermo/povm.hpp"

namespace thermo {

struct EnsembleSpec {
  int samples = 1000;
  std::uint64_t seed = 20170101;
  /// Append the ground and excited states after the random samples.
  bool include_poles = true;
};

/// Temperatures at which curves are evaluated, sharing one coupling.
struct TemperatureGrid {
  std::vector<double> temperatures;
  double gamma = 1.0;
  double omega_over_gamma = 0.0;

  /// `steps` uniformly spaced points on [t_min, t_max], both ends included.
  static TemperatureGrid uniform(double t_min, double t_max, int steps, double gamma = 1.0);

  BathParams bath(std::size_t i) const {
    return BathParams(temperatures[i], gamma, omega_over_gamma);
  }
};

/// Hilbert-Schmidt distributed qubit states: rho = G G^dagger / Tr(G G^dagger)
/// with G a 2x2 matrix of i.i.d. standard complex Gaussians, which has the
/// law of the reduced state of a Haar-random pure state on C^2 (x) C^2.
/// Deterministic in spec.seed.
std::vector<QubitState> sample_states(const EnsembleSpec& spec);

struct BandCurve {
  Scheme scheme = Scheme::IID;
  int n = 1;
  double tau = 0.0;
  double phi = 0.0;
  std::vector<double> temperatures;
  std::vector<double> fi_min;
  std::vector<double> fi_mean;
  std::vector<double> fi_max;
  /// Index into the evaluated state list of the minimizing/maximizing state
  /// (lowest index on ties).
  std::vector<std::size_t> argmin_index;
  std::vector<std::size_t> argmax_index;
  std::vector<QubitState> argmin_state;
  std::vector<QubitState> argmax_state;
};

BandCurve band_curve(Scheme scheme, int n, double tau, const MeasurementFamily& family,
                     const TemperatureGrid& grid, std::span<const QubitState> states,
                     unsigned threads = 0);

BandCurve band_curve(Scheme scheme, int n, double tau, const MeasurementFamily& family,
                     const TemperatureGrid& grid, const EnsembleSpec& ensemble,
                     unsigned threads = 0);

/// Raised when the IID band width vanishes and the ratio is undefined.
class DegenerateBandError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr int kMaxBandwidthN = 12;

struct BandWidthRatio {
  std::vector<int> n_values;
  std::vector<double> ratio;      // delta_sms / delta_iid
  std::vector<double> delta_sms;  // max - min over the ensemble
  std::vector<double> delta_iid;
  /// Temperature at which the widths were taken: the peak of the IID mean curve.
  std::vector<double> peak_temperature;
};

/// For n = 1..n_max, the ratio of SMS to IID max-min band widths at the peak
/// of the IID ensemble-mean curve. Throws DegenerateBandError if an IID band
/// width is zero and std::domain_error if n_max is outside [1, 12].
BandWidthRatio bandwidth_ratio(int n_max, double tau, const MeasurementFamily& family,
                               const TemperatureGrid& grid, const EnsembleSpec& ensemble,
                               unsigned threads = 0);

}  // namespace thermo
