#pragma once

#include <cstddef>
#include <functional>

namespace artic {

/// Worker count: ARTIC_CANON_THREADS when set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; callers write
/// results into per-index slots so the outcome never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace artic
