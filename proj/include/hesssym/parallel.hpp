#pragma once

// Deterministic bounded parallelism. The worker count is capped by the
// HESSSYM_THREADS environment variable (default: hardware concurrency).
// Callers write results into preallocated slots indexed by job id, so outputs
// are identical regardless of scheduling.

#include <cstddef>
#include <functional>

namespace hesssym {

// Number of workers to use for njobs independent jobs.
std::size_t worker_count(std::size_t njobs);

// Runs fn(i) for every i in [0, n). Exceptions thrown by jobs are rethrown
// (first one wins) after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hesssym
