#include "parajones/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parajones {

int hardware_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

namespace {

// First exception wins; the rest are dropped after all threads joined.
struct ExceptionBox {
  std::mutex mu;
  std::exception_ptr eptr;
  void capture() {
    std::lock_guard<std::mutex> lock(mu);
    if (!eptr) eptr = std::current_exception();
  }
  void rethrow_if_set() {
    if (eptr) std::rethrow_exception(eptr);
  }
};

}  // namespace

void parallel_for_chunks(long long begin, long long end, int chunks,
                         const std::function<void(int, long long, long long)>& fn) {
  if (end <= begin) return;
  const long long total = end - begin;
  if (chunks > total) chunks = static_cast<int>(total);
  if (chunks <= 1) {
    fn(0, begin, end);
    return;
  }
  ExceptionBox box;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(chunks));
  for (int i = 0; i < chunks; ++i) {
    long long b = begin + total * i / chunks;
    long long e = begin + total * (i + 1) / chunks;
    threads.emplace_back([&fn, &box, i, b, e] {
      try {
        fn(i, b, e);
      } catch (...) {
        box.capture();
      }
    });
  }
  for (auto& t : threads) t.join();
  box.rethrow_if_set();
}

void parallel_tasks(int workers, const std::vector<std::function<void()>>& tasks) {
  if (tasks.empty()) return;
  if (workers > static_cast<int>(tasks.size())) workers = static_cast<int>(tasks.size());
  if (workers <= 1) {
    for (const auto& t : tasks) t();
    return;
  }
  std::atomic<size_t> next{0};
  ExceptionBox box;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int i = 0; i < workers; ++i) {
    threads.emplace_back([&] {
      try {
        for (;;) {
          size_t k = next.fetch_add(1);
          if (k >= tasks.size()) return;
          tasks[k]();
        }
      } catch (...) {
        box.capture();
      }
    });
  }
  for (auto& t : threads) t.join();
  box.rethrow_if_set();
}

}  // namespace parajones
