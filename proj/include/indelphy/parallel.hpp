#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace indelphy {

// Worker count: INDELPHY_THREADS env var if set, hardware concurrency otherwise.
inline int default_thread_count() {
  if (const char* env = std::getenv("INDELPHY_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(trial) for trial in [0, n_trials) across workers. Callers index
// result slots by trial, so scheduling order never affects the outcome. The
// first exception thrown by any worker is rethrown here after the join.
template <typename Fn>
void run_trials(int n_trials, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_thread_count();
  if (threads > n_trials) threads = n_trials;
  if (threads <= 1) {
    for (int t = 0; t < n_trials; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&]() {
      while (!failed.load(std::memory_order_relaxed)) {
        int t = next.fetch_add(1);
        if (t >= n_trials) break;
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& th : workers) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace indelphy
