#include "catmap/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace catmap {

int thread_cap() noexcept {
  if (const char* env = std::getenv("CATMAP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void configure_threads() noexcept {
#ifdef _OPENMP
  omp_set_num_threads(thread_cap());
#endif
}

}  // namespace catmap
