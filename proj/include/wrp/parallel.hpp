#pragma once

#include <cstddef>
#include <functional>

namespace wrp {

/// Process-wide worker count used by every parallel loop; 1 by default.
void set_threads(int n);
int threads();

/// Runs body(begin, end) over [0, n) split into fixed contiguous chunks.
/// Chunk boundaries depend only on n and the thread count, and each index is
/// visited exactly once, so callers that write results by index get the same
/// output for any thread count. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wrp
