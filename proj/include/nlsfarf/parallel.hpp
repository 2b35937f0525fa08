#pragma once
// Minimal job-list parallelism for independent scenario runs. Worker count
// honors NLSFARF_THREADS (0 or unset = hardware concurrency).

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nlsfarf {

inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("NLSFARF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0)
      return v == 0 ? hw : static_cast<unsigned>(v);
  }
  return hw;
}

// Runs every job exactly once, using up to thread_budget() workers. The
// first exception (in job order) is rethrown after all jobs finish, so a
// failing job cannot leave others half-cancelled.
inline void run_parallel(const std::vector<std::function<void()>>& jobs) {
  if (jobs.empty()) return;
  const unsigned budget = thread_budget();
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(budget, jobs.size()));
  std::vector<std::exception_ptr> errors(jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          jobs[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nlsfarf
