#include "greenlab/parallel.hpp"

#include <atomic>

namespace greenlab {

namespace {
std::atomic<int> g_workers{1};
}

int workers() noexcept { return g_workers.load(std::memory_order_relaxed); }

void set_workers(int n) noexcept { g_workers.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

}  // namespace greenlab
