#pragma once
#include <atomic>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gravdisk {

// Runtime switch between the OpenMP kernels and the serial reference path,
// so tests can compare both on identical inputs and bench can time them.
inline std::atomic<bool>& parallel_flag() {
  static std::atomic<bool> on{true};
  return on;
}
inline bool parallel_enabled() { return parallel_flag().load(); }
inline void set_parallel(bool on) { parallel_flag().store(on); }

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Data-parallel map over [0, n). Each index is written by exactly one thread
// and no reduction happens here, so the parallel result is byte-identical to
// the serial one. All reductions elsewhere accumulate serially in a fixed
// order to keep runs bit-reproducible.
template <class F>
void par_for(std::size_t n, F&& body) {
#ifdef _OPENMP
  if (parallel_enabled() && n > 1) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace gravdisk
