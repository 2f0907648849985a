#pragma once

// OpenMP helpers shared by the kernels. Without OpenMP the pragmas vanish and
// every kernel runs serially with identical results.

#define RTV_PRAGMA(x) _Pragma(#x)
#if defined(_OPENMP)
#include <omp.h>
#define RTV_OMP(x) RTV_PRAGMA(omp x)
#else
#define RTV_OMP(x)
#endif

namespace rtv {

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rtv
