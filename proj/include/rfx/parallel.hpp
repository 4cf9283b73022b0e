#ifndef RFX_PARALLEL_HPP
#define RFX_PARALLEL_HPP

#include <cstdint>

namespace rfx {

// Worker count used by the parallel kernels: RFX_THREADS if set to a
// positive integer, otherwise the OpenMP default (1 in a non-OpenMP build).
int max_threads();

// Runs f(i) for i in [0, n).  Iterations must be independent and each must
// write only its own outputs; under that contract results do not depend on
// the schedule or the thread count.
template <typename F>
void parallel_for(std::int64_t n, F&& f);

}  // namespace rfx

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfx {

template <typename F>
void parallel_for(std::int64_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::int64_t i = 0; i < n; ++i) f(i);
#else
  for (std::int64_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace rfx

#endif  // RFX_PARALLEL_HPP
