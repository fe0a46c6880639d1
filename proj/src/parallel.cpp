#include "nlfv/parallel.hpp"

#include "nlfv/types.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlfv {

int configure_threads() {
  const char* env = std::getenv("NLFV_THREADS");
  if (env && *env) {
    int n = -1;
    const char* end = env + std::strlen(env);
    const auto res = std::from_chars(env, end, n);
    if (res.ec != std::errc() || res.ptr != end || n < 0)
      throw ConfigError(std::string("NLFV_THREADS must be a non-negative integer, got '") + env +
                        "'");
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
  }
  return thread_count();
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace nlfv
