#include "permreg/parallel.hpp"

#include <atomic>

namespace permreg {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads.store(threads < 0 ? 1 : threads); }

int thread_count() {
  int t = g_threads.load();
  if (t == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return t;
}

}  // namespace permreg
