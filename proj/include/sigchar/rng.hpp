#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace sigchar {

using Rng = std::mt19937_64;

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Seed of sample `index` under `master`; independent of evaluation order.
std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index);

Rng make_rng(std::uint64_t seed);

// Worker count used by parallel_for; 0 means hardware concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Calls body(i) for i in [0, n) on a pool of threads. Indices are handed out
/// in fixed chunks and every body writes to its own slot, so results do not
/// depend on the schedule. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body &&body, std::size_t chunk = 256) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), (n + chunk - 1) / chunk));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::mutex lock;
  std::size_t next = 0;
  std::exception_ptr error;
  auto run = [&]() {
    while (true) {
      std::size_t lo;
      {
        std::lock_guard<std::mutex> g(lock);
        if (next >= n || error) return;
        lo = next;
        next += chunk;
      }
      const std::size_t hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace sigchar
