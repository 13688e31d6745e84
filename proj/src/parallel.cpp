#include "paris/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace paris {
namespace {

int hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int initial_thread_count() {
  const int hw = hardware_threads();
  if (const char* env = std::getenv("PARIS_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) return std::min(requested, hw);
    } catch (...) {
      // fall through to the default
    }
  }
  return hw;
}

int& configured_threads() {
  static int threads = initial_thread_count();
  return threads;
}

}  // namespace

int thread_count() { return configured_threads(); }

void set_thread_count(int threads) { configured_threads() = std::max(1, threads); }

void for_each_index(std::size_t n, Execution exec, const std::function<void(std::size_t)>& body) {
  if (exec == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::mutex guard;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (i < failed_index) {
        failed_index = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace paris
