#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ilab {

// Worker count: INSIDERLAB_THREADS overrides, absence means hardware auto.
unsigned thread_count();

// Runs fn(i) for i in [0, count). Work is split into contiguous chunks; fn must
// only write to per-index slots so results are independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// Pairwise (cascade) summation: fixed association order, independent of how the
// values were produced, so parallel runs reduce identically.
double pairwise_sum(std::span<const double> values);

} // namespace ilab
