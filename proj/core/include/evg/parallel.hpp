#pragma once

#include <cstddef>
#include <functional>

namespace evg {

// Worker count: `requested` if nonzero, else EVG_THREADS, else the hardware
// concurrency; EVG_THREADS also caps an explicit request.
unsigned resolve_threads(unsigned requested = 0);

// Runs body(i) for i in [0, n) on up to `threads` workers, striding the
// index range. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace evg
