#include "sehgnn/common.hpp"

#include <omp.h>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace sehgnn {

void set_num_threads(int threads) {
  if (threads < 1) {
    throw std::invalid_argument("thread count must be positive");
  }
  omp_set_num_threads(threads);
}

int num_threads() { return omp_get_max_threads(); }

void retain_freed_memory() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

}  // namespace sehgnn
