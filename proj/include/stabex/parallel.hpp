#pragma once

#include <cstddef>
#include <functional>

namespace stabex {

// Thread count used when a call does not pass one explicitly. 0 means hardware concurrency.
void set_default_threads(int n);
int default_threads();

// Runs body(i) for i in [0, n). Each index runs exactly once; results must be written
// into per-index slots so that reductions stay in index order. The first exception
// (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

} // namespace stabex
