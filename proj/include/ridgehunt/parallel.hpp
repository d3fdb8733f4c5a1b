#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ridgehunt {

// Hands out chunks of [0, n) to competing workers. Results must be written
// to slots indexed by the item id so the output does not depend on which
// thread processed which chunk.
class IndexPool {
 public:
  IndexPool(std::size_t n, std::size_t chunk) : n_(n), chunk_(chunk ? chunk : 1) {}

  bool next(std::size_t& begin, std::size_t& end) {
    const std::size_t b = cursor_.fetch_add(chunk_, std::memory_order_relaxed);
    if (b >= n_) return false;
    begin = b;
    end = b + chunk_ < n_ ? b + chunk_ : n_;
    return true;
  }

 private:
  std::size_t n_;
  std::size_t chunk_;
  std::atomic<std::size_t> cursor_{0};
};

// Runs worker(pool) on several threads (or inline when parallel is false).
// Each worker owns its scratch state and pulls chunks until the pool drains.
template <class Worker>
void run_parallel(std::size_t n, bool parallel, Worker worker, std::size_t chunk = 8) {
  IndexPool pool(n, chunk);
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t want = parallel ? (hw ? hw : 1) : 1;
  const std::size_t threads = want < n ? want : (n ? n : 1);
  if (threads <= 1) {
    worker(pool);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> team;
  team.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    team.emplace_back([&]() {
      try {
        worker(pool);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : team) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ridgehunt
