#pragma once

// Data parallelism for pointwise kernels.  Only loops whose iterations
// write disjoint locations go through parallel_for, so results never
// depend on the thread count; reductions stay on the fixed pairwise tree
// (reduce.hpp) and transforms run single-threaded.

#include <cstddef>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qbe {

// honor THREADS=<k> (used by the CLI and the reproducibility tests)
inline void set_threads_from_env() {
#ifdef _OPENMP
  if (const char* s = std::getenv("THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) omp_set_num_threads(v);
  }
#endif
}

template <class F>
void parallel_for(std::ptrdiff_t n, const F& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
#else
  for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace qbe
