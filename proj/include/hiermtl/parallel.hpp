#pragma once

#include <cstddef>
#include <functional>

namespace hiermtl {

// Worker count: HIERMTL_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_budget();

// Runs body(0..n-1) on up to thread_budget() threads. Each index runs exactly
// once; the first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hiermtl
