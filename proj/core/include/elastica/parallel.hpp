#pragma once

#include <cstddef>
#include <functional>

namespace elastica {

// Worker count: ELASTICA_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Calls body(i) for i in [0, n). Each index is independent, so results
// written by index are identical to a serial run.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace elastica
