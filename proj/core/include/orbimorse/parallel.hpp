#pragma once

#include <cstddef>
#include <functional>

namespace orbimorse {

// Worker count used by library-level parallel maps. 0 means
// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for i in [0, count) on up to thread_count() threads, in
// contiguous blocks. Results must be written to per-index slots so that any
// reduction afterwards happens in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace orbimorse
