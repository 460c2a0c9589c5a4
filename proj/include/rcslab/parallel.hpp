#pragma once

#include <cstddef>
#include <functional>

namespace rcs {

/// Environment variable that sets the worker count for scans.
inline constexpr const char* kThreadsEnv = "RCSLAB_THREADS";

/// Worker count from RCSLAB_THREADS; 1 when unset or invalid.
int thread_count();

/// Runs task(i) for i in [0, n). Each task writes only its own slot, so the
/// result is independent of the worker count. Exceptions are rethrown (the
/// one from the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  int threads = thread_count());

}  // namespace rcs
