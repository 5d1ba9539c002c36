#ifndef FMLAB_DETAIL_PARALLEL_HPP
#define FMLAB_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fmlab {

namespace detail {
inline std::atomic<int>& worker_setting() {
  static std::atomic<int> w{0};
  return w;
}
}  // namespace detail

/// Number of worker threads used by data-parallel loops. 0 means "ask the
/// FMLAB_WORKERS environment variable, else hardware concurrency".
inline void set_workers(int n) { detail::worker_setting() = std::max(0, n); }

inline int workers() {
  int w = detail::worker_setting();
  if (w > 0) return w;
  if (const char* env = std::getenv("FMLAB_WORKERS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Runs body(i) for i in [0, n). Each index is handled by exactly one
/// thread; callers write results into per-index slots so the outcome does not
/// depend on the worker count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto w = static_cast<std::size_t>(std::min<std::size_t>(workers(), n));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(w - 1);
  for (std::size_t t = 0; t + 1 < w; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail
}  // namespace fmlab

#endif  // FMLAB_DETAIL_PARALLEL_HPP
