#pragma once

#include <cstddef>
#include <functional>

namespace tfloc {

/// Number of worker threads used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Calls body(i) for every i in [begin, end), split into contiguous chunks over
/// the configured worker threads. Each index is visited exactly once; bodies that
/// write only to index-owned storage give results independent of the thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace tfloc
