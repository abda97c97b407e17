#pragma once

#include <cstddef>
#include <functional>

namespace fraclap {

/// Worker cap: FRACLAP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Splits [0, n) into contiguous chunks, one per worker. The first exception
/// thrown by any chunk is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fraclap
