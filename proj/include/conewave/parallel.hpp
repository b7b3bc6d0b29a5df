#pragma once

#include <cstddef>
#include <functional>

namespace conewave {

// Worker count: CONEWAVE_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n). Each index is visited by exactly one worker, so
// writes to per-index slots are race free and results do not depend on the
// thread count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conewave
