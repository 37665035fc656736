#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace greenlab {

// Process-wide worker count used by every parallel loop. Results never depend
// on it: loops write per-index slots and reductions run in index order.
int workers() noexcept;
void set_workers(int n) noexcept;

// Runs body(i) for i in [0, n) over contiguous static chunks. If any index
// throws, the exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto w = static_cast<std::size_t>(workers());
  if (w <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunks = w < n ? w : n;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::size_t> error_index(chunks, std::numeric_limits<std::size_t>::max());
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    threads.emplace_back([&, c] {
      const std::size_t lo = c * n / chunks;
      const std::size_t hi = (c + 1) * n / chunks;
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          body(i);
        } catch (...) {
          errors[c] = std::current_exception();
          error_index[c] = i;
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  std::size_t best = chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (errors[c] && (best == chunks || error_index[c] < error_index[best])) best = c;
  }
  if (best != chunks) std::rethrow_exception(errors[best]);
}

}  // namespace greenlab
