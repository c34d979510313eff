#pragma once

#include <cstddef>
#include <functional>

namespace svmreg {

/// Worker count: SVMREG_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Runs body(0..count-1) on up to `threads` workers. Each index runs exactly once;
/// the first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = thread_count());

}  // namespace svmreg
