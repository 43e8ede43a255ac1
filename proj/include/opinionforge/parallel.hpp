#pragma once

#include <cstddef>
#include <functional>

namespace opinionforge {

// Worker cap: OPINIONFORGE_THREADS environment variable; 0 or unset means
// auto (hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads with static
// chunking. Every index must be independent of the others; callers keep
// determinism by deriving a private random stream per index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace opinionforge
