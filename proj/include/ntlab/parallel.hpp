#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ntlab {

/// Worker count used by the library; 0 means "all available cores".
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Splits [0, n) into contiguous blocks, one per worker, and calls
/// body(begin, end, block_index). Block boundaries depend only on n and the
/// worker count, so callers that reduce per-block results in block order get
/// the same answer on every run with the same settings.
template <typename Body>
void parallel_blocks(std::size_t n, Body&& body, std::size_t min_block = 1024) {
  if (n == 0) return;
  std::size_t workers = std::max<std::size_t>(1, thread_count());
  workers = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_block)));
  if (workers == 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Number of blocks parallel_blocks will use for n items.
std::size_t block_count(std::size_t n, std::size_t min_block = 1024);

}  // namespace ntlab
