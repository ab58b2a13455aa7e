#pragma once

#include <cstdint>
#include <functional>

namespace dppmix {

/// Worker cap: DPPMIX_THREADS if set (>= 1), otherwise hardware concurrency.
int max_threads();

/// Runs fn(i) for i in [begin, end) on up to max_threads() workers with a
/// static block partition. Callers must make iterations independent (e.g.
/// write only to slot i); results are then identical to the serial loop.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace dppmix
