#include "perc/parallel.hpp"

namespace perc {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  g_workers = workers;
}

unsigned worker_count() { return g_workers; }

}  // namespace perc
