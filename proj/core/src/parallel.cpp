#include "pcmas/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pcmas {

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("PCMAS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(hw, v);
    if (end != env && v < 1) hw = 1;
  }
  return hw;
}

void parallel_for(long long n, const std::function<void(long long)>& fn) {
  int workers = thread_count();
  if (n <= 0) return;
  if (workers == 1 || n < 2 * workers) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    constexpr long long kChunk = 16;
    for (;;) {
      long long begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      long long end = std::min(begin + kChunk, n);
      try {
        for (long long i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pcmas
