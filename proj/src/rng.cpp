#include "sigchar/rng.hpp"

#include <atomic>

namespace sigchar {

namespace {
std::atomic<unsigned> g_workers{0};
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) { return mix64(mix64(master) ^ mix64(~index)); }

Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
  const unsigned w = g_workers;
  if (w != 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

} // namespace sigchar
