#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace labornet {

/// Runs body(k) for k in [0, count) on up to `jobs` threads. Results must be
/// written to slots indexed by k, so the outcome does not depend on the
/// schedule. The exception of the lowest failing index is rethrown after
/// every worker has joined.
template <typename Body>
void parallel_for(std::size_t count, std::size_t jobs, Body body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace labornet
