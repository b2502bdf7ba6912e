#pragma once

#include <cstddef>
#include <functional>

namespace latcap {

// Runs fn(0..count-1) on up to `workers` threads. Tasks must be pure in their
// index (outputs written to index-owned slots), which makes the result
// independent of the worker count.
void run_indexed(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace latcap
