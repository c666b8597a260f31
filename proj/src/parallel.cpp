#include "wrp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "wrp/errors.hpp"

namespace wrp {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "thread count must be >= 1");
  g_threads.store(n);
}

int threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads()), n);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = n * t / workers;
    const std::size_t end = n * (t + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wrp
