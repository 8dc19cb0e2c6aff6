#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace twotier::detail {

// Runs fn(chunk) for chunk in [0, n_chunks) on up to hardware_concurrency
// threads. Callers write per-chunk results into preallocated slots and reduce
// them in chunk order, so the outcome never depends on the schedule.
template <typename Fn>
void for_each_chunk(std::size_t n_chunks, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(
      n_chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) {
          try {
            fn(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace twotier::detail
