#include "balanced/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace balanced {

int thread_budget() {
  static const int budget = [] {
    int requested = 0;
    if (const char* env = std::getenv("BALANCED_EMBED_THREADS")) {
      requested = std::atoi(env);
      if (requested < 0) requested = 0;
    }
    if (requested == 0) {
      requested = static_cast<int>(std::thread::hardware_concurrency());
    }
    return requested > 0 ? requested : 1;
  }();
  return budget;
}

void parallel_blocks(int num_blocks, const std::function<void(int)>& work) {
  if (num_blocks <= 0) return;
  const int workers = std::min(thread_budget(), num_blocks);
  if (workers <= 1) {
    for (int b = 0; b < num_blocks; ++b) work(b);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run = [&] {
    while (true) {
      const int b = next.fetch_add(1);
      if (b >= num_blocks || failed.load()) break;
      try {
        work(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) threads.emplace_back(run);
  run();
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace balanced
