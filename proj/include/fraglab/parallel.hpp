#pragma once

#include <cstddef>
#include <functional>

namespace fraglab {

/// Worker count: hardware concurrency, capped by FRAGLAB_THREADS when set.
unsigned worker_count();

/// Runs body(chunk) for chunk in [0, n_chunks) on up to `workers` threads.
///
/// Chunks are claimed dynamically; callers store per-chunk results and
/// combine them in chunk order, which keeps reductions independent of the
/// thread count.
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& body,
                         unsigned workers = 0);

}  // namespace fraglab
