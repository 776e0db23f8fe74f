#pragma once

#include <cstddef>
#include <functional>

namespace relform {

/// Worker count: RELFORM_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Results must be
/// written to per-index slots; any exception is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace relform
