#include "subcorr/threading.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subcorr::threading {

namespace {

int env_cap() {
  static const int cap = [] {
    const char* s = std::getenv("SUBCORR_THREADS");
    if (!s) return 0;
    const int v = std::atoi(s);
    return v > 0 ? v : 0;
  }();
  return cap;
}

int g_cap = 0;

constexpr std::size_t kGrain = 4096;

} // namespace

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (env_cap() > 0) n = std::min(n, env_cap());
  if (g_cap > 0) n = std::min(n, g_cap);
  return std::max(n, 1);
}

void set_cap(int cap) { g_cap = cap > 0 ? cap : 0; }

int workers_for(std::size_t work) {
  if (work < kGrain) return 1;
  return max_threads();
}

} // namespace subcorr::threading
