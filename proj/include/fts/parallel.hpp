#pragma once

#include <cstddef>
#include <functional>

namespace fts {

//! Worker count used by parallel_for: the value passed to set_max_threads,
//! else FTS_THREADS, else the hardware concurrency. Zero means automatic.
std::size_t max_threads();
void set_max_threads(std::size_t threads);

//! Runs body(i) for i in [0, count) on contiguous chunks. Calls nested in a
//! running parallel_for execute serially. If several iterations throw, the
//! exception of the smallest index is rethrown, so failures are reported
//! identically for every thread count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel = 2);

} // namespace fts
