#include "rfx/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfx {

int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("RFX_THREADS")) {
      try {
        int n = std::stoi(env);
        if (n > 0) return n;
      } catch (...) {
        // fall through to the default on unparsable values
      }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cached;
}

}  // namespace rfx
