#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace lclt {

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("LANDSCAPE_CLT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// fn(i) for i in [0, count). Work items must write only to slots keyed by
// their own index, which makes any thread count bit-identical to serial.
template <typename Fn>
void parallel_for(std::uint64_t count, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  if (threads <= 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      while (true) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count || failed.load(std::memory_order_relaxed)) break;
        fn(i);
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, count));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace lclt
