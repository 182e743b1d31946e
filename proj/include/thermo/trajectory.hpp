// Monte-Carlo measurement records, maximum-likelihood temperature estimates
// and their empirical error compared with the Cramer-Rao bound.

#pragma once

#include <cstdint>
#include <vector>

#include "thermo/bloch.hpp"
#include "thermo/fisher.hpp"

namespace thermo {

struct TrajectoryRecord {
  std::vector<Outcome> outcomes;
  Scheme scheme = Scheme::SMS;
  double true_temperature = 0.0;
  std::uint64_t seed = 0;
};

/// Seed of trial `index` in a run seeded with `seed`. Trial streams depend
/// only on (seed, index), never on execution order.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Draws one outcome string. SMS samples each outcome from the current
/// conditional distribution and then applies the jump; IID draws n
/// independent outcomes from P(s|rho(tau)).
TrajectoryRecord simulate(const ProtocolSpec& spec, const BathParams& bath, std::uint64_t seed);

/// Log-probability of the record's outcomes at temperature `temperature`.
double log_likelihood(const TrajectoryRecord& record, const ProtocolSpec& spec,
                      const BathParams& bath);

struct PriorRange {
  double lo = 0.1;
  double hi = 5.0;
};

inline constexpr int kLikelihoodGridPoints = 128;
inline constexpr double kEstimateTolerance = 1e-6;

struct MleResult {
  double estimate = 0.0;
  double log_likelihood = 0.0;
  /// The maximizer sits on an end of the prior range.
  bool boundary_hit = false;
  /// The likelihood does not depend on T (e.g. uninformative measurement).
  bool flat_likelihood = false;
};

/// Grid search on 128 uniform points of the prior range, then golden-section
/// refinement of the bracketing interval to |dT| < 1e-6. `bath` supplies the
/// coupling; its temperature is ignored. Throws std::domain_error unless
/// 0 < prior.lo < prior.hi.
MleResult mle_estimate(const TrajectoryRecord& record, const ProtocolSpec& spec,
                       const BathParams& bath, PriorRange prior = {});

struct EstimationReport {
  int trials = 0;
  std::vector<double> estimates;
  double true_temperature = 0.0;
  double rmse = 0.0;
  double median = 0.0;
  /// Fisher information of the n-measurement protocol at the true temperature.
  double fisher = 0.0;
  /// 1/sqrt(fisher).
  double crb = 0.0;
  /// rmse * sqrt(fisher).
  double ratio = 0.0;
  int boundary_hits = 0;
  int flat_records = 0;
};

/// Fisher information used for the bound: n * F(rho(tau)) for IID; for SMS
/// the enumerated value when n <= 24, else the merged-branch evaluation.
double protocol_fisher_information(const ProtocolSpec& spec, const BathParams& bath);

/// Runs `trials` simulate + mle_estimate rounds at bath.temperature().
/// Throws std::domain_error if trials < 100.
EstimationReport crb_report(const ProtocolSpec& spec, const BathParams& bath, int trials,
                            std::uint64_t seed, PriorRange prior = {}, unsigned threads = 0);

}  // namespace thermo
