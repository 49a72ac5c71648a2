#pragma once

#include <cstddef>
#include <functional>

namespace dvx {

// Worker count used by all data-parallel loops; 0 means hardware concurrency.
void set_num_threads(unsigned n);
unsigned num_threads();

// Runs body(i) for i in [0, n). Each index is computed by exactly one worker and
// results must be written to index-owned slots, so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dvx
