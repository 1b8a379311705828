// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lerf {

namespace {
std::atomic<int> g_threads{0};
// Nested calls (e.g. per-image work that itself resamples) run inline.
thread_local bool t_in_parallel = false;
}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(0, threads)); }

int thread_count() {
  const int requested = g_threads.load();
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_rows(int rows, const std::function<void(int, int)>& body) {
  if (rows <= 0) return;
  const int workers = t_in_parallel ? 1 : std::min(thread_count(), rows);
  if (workers == 1) {
    body(0, rows);
    return;
  }

  // Small fixed-size chunks handed out dynamically; each chunk writes
  // disjoint rows so ordering between threads does not matter.
  const int chunk = std::max(1, rows / (workers * 4));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    t_in_parallel = true;
    for (;;) {
      const int begin = next.fetch_add(chunk);
      if (begin >= rows) break;
      try {
        body(begin, std::min(rows, begin + chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(rows);
        break;
      }
    }
    t_in_parallel = false;
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lerf
