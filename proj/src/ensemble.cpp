#include "thermo/ensemble.hpp"

#include <algorithm>
#include <complex>
#include <random>

#include "thermo/parallel.hpp"

namespace thermo {

TemperatureGrid TemperatureGrid::uniform(double t_min, double t_max, int steps, double gamma) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw std::domain_error("temperature grid requires 0 < T_min < T_max");
  }
  if (steps < 2) throw std::domain_error("temperature grid requires at least 2 steps");
  TemperatureGrid grid;
  grid.gamma = gamma;
  grid.temperatures.resize(static_cast<std::size_t>(steps));
  const double h = (t_max - t_min) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid.temperatures[static_cast<std::size_t>(i)] = t_min + h * i;
  grid.temperatures.back() = t_max;
  return grid;
}

std::vector<QubitState> sample_states(const EnsembleSpec& spec) {
  if (spec.samples < 1) throw std::domain_error("ensemble needs at least one sample");
  std::mt19937_64 engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&] {
    const double re = normal(engine);
    const double im = normal(engine);
    return std::complex<double>(re, im);
  };

  std::vector<QubitState> states;
  states.reserve(static_cast<std::size_t>(spec.samples) + 2);
  for (int k = 0; k < spec.samples; ++k) {
    // Row 0 is the excited level, row 1 the ground level.
    const std::complex<double> g00 = gaussian(), g01 = gaussian();
    const std::complex<double> g10 = gaussian(), g11 = gaussian();
    const double excited = std::norm(g00) + std::norm(g01);
    const double ground = std::norm(g10) + std::norm(g11);
    const std::complex<double> coherence = g00 * std::conj(g10) + g01 * std::conj(g11);
    const double trace = excited + ground;
    states.push_back({2.0 * coherence.real() / trace, -2.0 * coherence.imag() / trace,
                      (excited - ground) / trace});
  }
  if (spec.include_poles) {
    states.push_back(QubitState::ground());
    states.push_back(QubitState::excited());
  }
  return states;
}

BandCurve band_curve(Scheme scheme, int n, double tau, const MeasurementFamily& family,
                     const TemperatureGrid& grid, std::span<const QubitState> states,
                     unsigned threads) {
  if (states.empty()) throw std::domain_error("band curve needs at least one input state");
  const std::size_t n_states = states.size();
  const std::size_t n_temps = grid.temperatures.size();

  // Fail fast on budget or field errors before spawning work.
  ProtocolSpec probe{scheme, n, tau, states.front(), family};
  probe.validate();

  // values[t * n_states + k]: state k at temperature t.
  std::vector<double> values(n_states * n_temps);
  parallel_for(
      n_states,
      [&](std::size_t k) {
        ProtocolSpec spec{scheme, n, tau, states[k], family};
        for (std::size_t t = 0; t < n_temps; ++t) {
          values[t * n_states + k] = fisher_information(spec, grid.bath(t)).value;
        }
      },
      threads);

  BandCurve curve;
  curve.scheme = scheme;
  curve.n = n;
  curve.tau = tau;
  curve.phi = family.phi();
  curve.temperatures = grid.temperatures;
  for (std::size_t t = 0; t < n_temps; ++t) {
    const std::span<const double> row(values.data() + t * n_states, n_states);
    const auto lo = std::min_element(row.begin(), row.end());
    const auto hi = std::max_element(row.begin(), row.end());
    const auto lo_idx = static_cast<std::size_t>(lo - row.begin());
    const auto hi_idx = static_cast<std::size_t>(hi - row.begin());
    curve.fi_min.push_back(*lo);
    curve.fi_max.push_back(*hi);
    // Clamp so rounding in the mean cannot break min <= mean <= max.
    curve.fi_mean.push_back(
        std::clamp(pairwise_sum(row) / static_cast<double>(n_states), *lo, *hi));
    curve.argmin_index.push_back(lo_idx);
    curve.argmax_index.push_back(hi_idx);
    curve.argmin_state.push_back(states[lo_idx]);
    curve.argmax_state.push_back(states[hi_idx]);
  }
  return curve;
}

BandCurve band_curve(Scheme scheme, int n, double tau, const MeasurementFamily& family,
                     const TemperatureGrid& grid, const EnsembleSpec& ensemble,
                     unsigned threads) {
  const auto states = sample_states(ensemble);
  return band_curve(scheme, n, tau, family, grid, states, threads);
}

BandWidthRatio bandwidth_ratio(int n_max, double tau, const MeasurementFamily& family,
                               const TemperatureGrid& grid, const EnsembleSpec& ensemble,
                               unsigned threads) {
  if (n_max < 1 || n_max > kMaxBandwidthN) {
    throw std::domain_error("bandwidth ratio requires 1 <= n_max <= 12");
  }
  const auto states = sample_states(ensemble);

  BandWidthRatio out;
  for (int n = 1; n <= n_max; ++n) {
    const BandCurve iid = band_curve(Scheme::IID, n, tau, family, grid, states, threads);
    const auto peak = static_cast<std::size_t>(
        std::max_element(iid.fi_mean.begin(), iid.fi_mean.end()) - iid.fi_mean.begin());
    const double delta_iid = iid.fi_max[peak] - iid.fi_min[peak];
    if (!(delta_iid > 0.0)) {
      throw DegenerateBandError("IID band width vanishes at n = " + std::to_string(n) +
                                "; ratio undefined");
    }
    TemperatureGrid at_peak{{grid.temperatures[peak]}, grid.gamma, grid.omega_over_gamma};
    const BandCurve sms = band_curve(Scheme::SMS, n, tau, family, at_peak, states, threads);
    const double delta_sms = sms.fi_max[0] - sms.fi_min[0];

    out.n_values.push_back(n);
    out.delta_iid.push_back(delta_iid);
    out.delta_sms.push_back(delta_sms);
    out.ratio.push_back(delta_sms / delta_iid);
    out.peak_temperature.push_back(grid.temperatures[peak]);
  }
  return out;
}

}  // namespace thermo
