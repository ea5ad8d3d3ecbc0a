#pragma once

#include <functional>

namespace pcmas {

/// Worker count: hardware concurrency capped by the PCMAS_THREADS
/// environment variable (values < 1 are treated as 1).
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers and joins
/// them all before returning. Falls back to a plain loop when n is small
/// or only one worker is available. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(long long n, const std::function<void(long long)>& fn);

}  // namespace pcmas
