#include "mayocut/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace mayocut {

namespace {

int env_default() {
  if (const char* s = std::getenv("MAYOCUT_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return 0;
}

std::atomic<int>& cap() {
  static std::atomic<int> value{env_default()};
  return value;
}

}  // namespace

void set_max_threads(int n) { cap().store(n >= 1 ? n : 0); }

int max_threads() {
  int v = cap().load();
  return v >= 1 ? v : omp_get_max_threads();
}

}  // namespace mayocut
