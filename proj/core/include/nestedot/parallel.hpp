#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nestedot {

// Runs body(task, worker) for every task in [0, count) on up to `threads`
// workers, handing out contiguous chunks from a shared counter. Returns after
// all tasks finish. The first exception thrown by any task is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, std::size_t chunk, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  chunk = std::max<std::size_t>(1, chunk);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, std::size_t{0});
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&](std::size_t id) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
        if (begin >= count) break;
        std::size_t end = std::min(count, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) body(i, id);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t id = 1; id < threads; ++id) pool.emplace_back(worker, id);
    worker(0);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace nestedot
