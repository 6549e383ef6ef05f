#pragma once

#include <cstddef>
#include <functional>

namespace seba {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kThreadsEnv = "SEBA_THREADS";

/// Worker count: $SEBA_THREADS when it parses as an integer >= 1, otherwise
/// the hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on the schedule. The first exception thrown by any
/// body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace seba
