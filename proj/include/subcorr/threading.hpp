#pragma once

#include <cstddef>

namespace subcorr::threading {

/// Number of worker threads kernels may use. Respects the SUBCORR_THREADS
/// environment variable (read once at first call) as an upper bound on the
/// OpenMP default; always at least 1.
int max_threads();

/// Override the thread cap programmatically (0 restores the default).
void set_cap(int cap);

/// Workers to use for a loop of `work` elements: 1 below the grain size,
/// otherwise max_threads(). Keeping small loops serial avoids fork overhead
/// without changing results (parallel kernels write disjoint locations).
int workers_for(std::size_t work);

} // namespace subcorr::threading
