#include "ntlab/parallel.hpp"

#include <atomic>

namespace ntlab {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  if (t != 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::size_t block_count(std::size_t n, std::size_t min_block) {
  if (n == 0) return 0;
  std::size_t workers = std::max<std::size_t>(1, thread_count());
  workers = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_block)));
  const std::size_t chunk = (n + workers - 1) / workers;
  return (n + chunk - 1) / chunk;
}

}  // namespace ntlab
