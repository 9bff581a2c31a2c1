#pragma once

#include <cstddef>
#include <functional>

namespace heatclf {

/// Worker count from HEATCLF_THREADS, falling back to the hardware count.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; callers must write only to per-index slots. The
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace heatclf
