#pragma once

#include <cstddef>
#include <functional>

namespace blockspec {

// Number of workers to use: `requested` if positive, otherwise the
// BLOCKSPEC_THREADS environment variable if set to a positive integer,
// otherwise the hardware concurrency (at least 1).
unsigned resolve_workers(unsigned requested = 0);

// Runs job(k) for k in [0, count) on up to `workers` threads. Jobs are handed
// out dynamically, so job(k) must depend on k only. After all workers join, the
// exception from the lowest-indexed failing job that ran is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job);

}  // namespace blockspec
