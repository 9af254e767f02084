#pragma once

#include <cstddef>
#include <functional>

namespace fracres::parallel {

/// Worker count: FRACRES_THREADS when set and positive, otherwise the hardware concurrency.
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads. Results must be
/// written to per-index slots; the first exception by index is rethrown.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracres::parallel
