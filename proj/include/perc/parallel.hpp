#ifndef PERC_PARALLEL_HPP
#define PERC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perc {

/// Process-wide worker count used by the estimators. 0 means
/// std::thread::hardware_concurrency().
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Work is handed out dynamically, so results
/// must be written to slot i only; reductions happen afterwards in index
/// order, which keeps every output independent of the worker count.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(worker_count(), std::max<std::int64_t>(n, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (std::int64_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Maps [0, n) through fn into a vector, in parallel.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::int64_t n, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(i); });
  return out;
}

}  // namespace perc

#endif  // PERC_PARALLEL_HPP
