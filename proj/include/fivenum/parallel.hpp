#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fivenum {

// Every parallel kernel in this project is a loop over independent blocks
// whose outputs land in disjoint slots, so results are identical for any
// thread count. Execution::serial is the reference path used by tests and
// the benchmark.
enum class Execution { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <class Fn>
void for_each_block(std::int64_t n_blocks, Execution exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Execution::parallel) {
    std::exception_ptr first_error;
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      try {
        fn(b);
      } catch (...) {
        #pragma omp critical(fivenum_block_error)
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
}

}  // namespace fivenum
