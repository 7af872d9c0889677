#pragma once

#include <cstddef>
#include <functional>

namespace ccrlab {

/// Worker count: hardware concurrency, capped by the CCR_LAB_THREADS environment variable.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// visited exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ccrlab
