#pragma once

#include <cstddef>
#include <functional>

namespace heunlab::numeric {

/// Worker count: HEUNLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned default_threads();

/// Calls body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; the first exception thrown by any body is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, unsigned threads = 0);

} // namespace heunlab::numeric
