#include "thermo/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "thermo/parallel.hpp"

namespace thermo {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both words.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrajectoryRecord simulate(const ProtocolSpec& spec, const BathParams& bath, std::uint64_t seed) {
  spec.validate_fields();
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  TrajectoryRecord record;
  record.scheme = spec.scheme;
  record.true_temperature = bath.temperature();
  record.seed = seed;
  record.outcomes.reserve(static_cast<std::size_t>(spec.n));

  if (spec.scheme == Scheme::IID) {
    const double plus = probability(spec.family, evolve(spec.rho0, bath, spec.tau)).plus;
    for (int j = 0; j < spec.n; ++j) {
      record.outcomes.push_back(uniform(engine) < plus ? Outcome::Plus : Outcome::Minus);
    }
    return record;
  }

  QubitState state = spec.rho0;
  for (int j = 0; j < spec.n; ++j) {
    const QubitState evolved = evolve(state, bath, spec.tau);
    const double plus = probability(spec.family, evolved).plus;
    const Outcome s = uniform(engine) < plus ? Outcome::Plus : Outcome::Minus;
    record.outcomes.push_back(s);
    state = apply(spec.family, evolved, s).state;
  }
  return record;
}

double log_likelihood(const TrajectoryRecord& record, const ProtocolSpec& spec,
                      const BathParams& bath) {
  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  if (record.scheme == Scheme::IID) {
    const auto probs = probability(spec.family, evolve(spec.rho0, bath, spec.tau));
    const auto plus_count = std::count(record.outcomes.begin(), record.outcomes.end(), Outcome::Plus);
    const auto minus_count = static_cast<std::ptrdiff_t>(record.outcomes.size()) - plus_count;
    double total = 0.0;
    if (plus_count > 0) total += plus_count * (probs.plus > 0.0 ? std::log(probs.plus) : kMinusInf);
    if (minus_count > 0) {
      total += minus_count * (probs.minus > 0.0 ? std::log(probs.minus) : kMinusInf);
    }
    return total;
  }

  double total = 0.0;
  QubitState state = spec.rho0;
  for (Outcome s : record.outcomes) {
    const auto branch = apply(spec.family, evolve(state, bath, spec.tau), s);
    if (branch.impossible) return kMinusInf;
    total += std::log(branch.weight);
    state = branch.state;
  }
  return total;
}

namespace {

/// Maximizes f on [a, b] by golden-section search.
template <class F>
double golden_section_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

MleResult mle_estimate(const TrajectoryRecord& record, const ProtocolSpec& spec,
                       const BathParams& bath, PriorRange prior) {
  if (!(prior.lo > 0.0) || !(prior.hi > prior.lo)) {
    throw std::domain_error("prior range requires 0 < T_lo < T_hi");
  }
  if (record.outcomes.size() != static_cast<std::size_t>(spec.n)) {
    throw std::invalid_argument("record length does not match n");
  }
  ProtocolSpec scored = spec;
  scored.scheme = record.scheme;
  auto loglik = [&](double temperature) {
    return log_likelihood(record, scored, bath.with_temperature(temperature));
  };

  constexpr int kPoints = kLikelihoodGridPoints;
  const double step = (prior.hi - prior.lo) / (kPoints - 1);
  std::vector<double> grid(kPoints);
  std::vector<double> values(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = i + 1 == kPoints ? prior.hi : prior.lo + step * i;
    values[i] = loglik(grid[i]);
  }
  const auto best_it = std::max_element(values.begin(), values.end());
  const auto worst_it = std::min_element(values.begin(), values.end());
  const int best = static_cast<int>(best_it - values.begin());

  MleResult result;
  if (std::isfinite(*best_it) && *best_it - *worst_it <= 1e-12 * (1.0 + std::abs(*best_it))) {
    result.flat_likelihood = true;
    result.estimate = 0.5 * (prior.lo + prior.hi);
    result.log_likelihood = *best_it;
    return result;
  }

  const double lo = grid[std::max(best - 1, 0)];
  const double hi = grid[std::min(best + 1, kPoints - 1)];
  double estimate = golden_section_max(loglik, lo, hi, kEstimateTolerance);
  double value = loglik(estimate);
  // Keep the grid point if refinement did not improve on it.
  if (!(value >= *best_it)) {
    estimate = grid[best];
    value = *best_it;
  }
  result.estimate = estimate;
  result.log_likelihood = value;
  result.boundary_hit = estimate - prior.lo < 2.0 * kEstimateTolerance ||
                        prior.hi - estimate < 2.0 * kEstimateTolerance;
  return result;
}

double protocol_fisher_information(const ProtocolSpec& spec, const BathParams& bath) {
  spec.validate_fields();
  if (spec.scheme == Scheme::IID) {
    return static_cast<double>(spec.n) * fi_single(spec.rho0, bath, spec.tau, spec.family).value;
  }
  return spec.n <= kMaxEnumeratedMeasurements ? fi_sms(spec, bath).value
                                              : fi_sms_merged(spec, bath).value;
}

EstimationReport crb_report(const ProtocolSpec& spec, const BathParams& bath, int trials,
                            std::uint64_t seed, PriorRange prior, unsigned threads) {
  if (trials < 100) throw std::domain_error("crb_report requires at least 100 trials");
  spec.validate_fields();

  std::vector<MleResult> results(static_cast<std::size_t>(trials));
  parallel_for(
      results.size(),
      [&](std::size_t i) {
        const auto record = simulate(spec, bath, trial_seed(seed, i));
        results[i] = mle_estimate(record, spec, bath, prior);
      },
      threads);

  EstimationReport report;
  report.trials = trials;
  report.true_temperature = bath.temperature();
  std::vector<double> squared;
  squared.reserve(results.size());
  for (const auto& r : results) {
    report.estimates.push_back(r.estimate);
    const double err = r.estimate - bath.temperature();
    squared.push_back(err * err);
    report.boundary_hits += r.boundary_hit ? 1 : 0;
    report.flat_records += r.flat_likelihood ? 1 : 0;
  }
  report.rmse = std::sqrt(pairwise_sum(squared) / trials);

  std::vector<double> sorted = report.estimates;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  report.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  report.fisher = protocol_fisher_information(spec, bath);
  report.crb = 1.0 / std::sqrt(report.fisher);
  report.ratio = report.rmse * std::sqrt(report.fisher);
  return report;
}

}  // namespace thermo
