/// @file parallel.hpp
/// @brief Index-range parallelism with a thread cap read from RICCATI_FLOW_THREADS.

#pragma once

#include <cstddef>
#include <functional>

namespace rflow {

/// Worker count: RICCATI_FLOW_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
[[nodiscard]] unsigned thread_budget();

/// Runs body(i) for every i in [0, n). Each index is visited exactly once; results written
/// by index are therefore independent of the partitioning.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace rflow
