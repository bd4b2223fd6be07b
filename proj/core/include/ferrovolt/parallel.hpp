#pragma once

// Thin worker-pool helper for loops over disjoint index ranges.
//
// Every parallelized loop in the solver writes to disjoint slots (per-face or
// per-row arrays) and all reductions stay sequential, so results are
// bit-identical for any worker count.  FERROVOLT_THREADS caps the number of
// workers; unset means hardware concurrency.

#include <cstddef>
#include <functional>

namespace ferrovolt {

// Worker count after applying the FERROVOLT_THREADS cap (>= 1).
int worker_count();

// Calls fn(begin, end) on contiguous chunks of [0, n), possibly from multiple
// threads.  Falls back to a single inline call for small n or one worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace ferrovolt
