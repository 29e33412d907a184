#pragma once

#include <cstddef>
#include <functional>

namespace fpade {

/// Worker count: hardware concurrency, capped by the FP_THREADS environment
/// variable when it holds a positive integer.
[[nodiscard]] std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index runs exactly once; the first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fpade
