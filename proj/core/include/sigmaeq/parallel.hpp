#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sigmaeq {

// Worker count for the scan layers. Work is always split into chunks whose
// boundaries do not depend on the worker count, and per-chunk partial
// results are merged in chunk order, so every result is independent of it.
struct Parallelism {
  unsigned workers = 1;

  static Parallelism hardware() {
    return Parallelism{std::max(1u, std::thread::hardware_concurrency())};
  }
};

// Runs body(chunk) for chunk in [0, chunks) on up to par.workers threads.
// The first exception thrown by any chunk is rethrown on the caller.
template <class Body>
void parallel_chunks(std::size_t chunks, Parallelism par, Body&& body) {
  const std::size_t threads =
      std::min<std::size_t>(std::max(1u, par.workers), chunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sigmaeq
