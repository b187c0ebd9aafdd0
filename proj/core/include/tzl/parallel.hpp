#pragma once

// Index-parallel loops whose results never depend on the thread count:
// callers write into slot i, and reductions run afterwards in index order.

#include <cstddef>
#include <functional>

namespace tzl {

/// Thread count from an explicit request (> 0), else TZL_THREADS, else the
/// hardware concurrency (at least 1).
int resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown on the calling thread (the one from the lowest index wins).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

} // namespace tzl
