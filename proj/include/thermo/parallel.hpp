// Deterministic data-parallel helpers. Work is split by index; results are
// written to caller-owned slots and reduced in a fixed order, so outputs do
// not depend on the number of workers.

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace thermo {

/// Worker count: `requested` if positive, else THERMO_THREADS if set and
/// positive, else std::thread::hardware_concurrency() (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Calls body(i) for every i in [0, count) using up to `threads` workers.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

/// Pairwise (tree) summation with a topology fixed by the input length.
double pairwise_sum(std::span<const double> values);

}  // namespace thermo
