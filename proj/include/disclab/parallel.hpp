#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace disclab {

// Worker count: `requested` wins if positive; otherwise the DISC_LAB_THREADS
// environment variable; 0 (or unset) means one worker per hardware thread.
inline int resolve_thread_count(int requested = 0) {
  int want = requested;
  if (want <= 0) {
    if (const char* env = std::getenv("DISC_LAB_THREADS")) {
      try {
        want = std::stoi(env);
      } catch (const std::exception&) {
        want = 0;
      }
    }
  }
  if (want <= 0) want = static_cast<int>(std::thread::hardware_concurrency());
  return want > 0 ? want : 1;
}

// Runs fn(0), ..., fn(count-1) across workers. Results must be keyed by the
// index so the schedule cannot influence them. The first exception thrown by
// any worker is rethrown on the caller's thread.
inline void parallel_for(int count, const std::function<void(int)>& fn,
                         int threads = 0) {
  const int workers = std::min(resolve_thread_count(threads), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace disclab
