#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irsim {

/**
 * Runs `work(begin, end)` over [0, total) split into fixed-size chunks and
 * returns one partial per chunk, in chunk order.
 *
 * Chunk boundaries depend only on `total` and `chunk`, never on `workers`, so
 * a caller that folds the partials left to right gets bit-identical results
 * for any worker count.
 */
template <class Partial, class Work>
std::vector<Partial> run_chunked(std::uint64_t total, std::uint64_t chunk, unsigned workers,
                                 Work work) {
  chunk = std::max<std::uint64_t>(chunk, 1);
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::vector<Partial> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto drain = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        const std::uint64_t begin = c * chunk;
        partials[c] = work(begin, std::min(total, begin + chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  workers = std::max(1u, workers);
  const auto spawned = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks)) ;
  if (spawned <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(spawned - 1);
    for (unsigned i = 1; i < spawned; ++i) pool.emplace_back(drain);
    drain();
  }
  if (failure) std::rethrow_exception(failure);
  return partials;
}

}  // namespace irsim
