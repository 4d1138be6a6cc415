#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gnep {

// Every data-parallel kernel takes one of these. `serial` is the reference
// path the tests compare against; results must be identical under both.
enum class Exec { serial, parallel };

inline int max_threads(Exec policy) {
#ifdef _OPENMP
  if (policy == Exec::parallel) return omp_get_max_threads();
#endif
  (void)policy;
  return 1;
}

// Static-chunk parallel loop. The body must only write to per-index slots or
// thread-local state; deterministic merging is the caller's job.
template <class Body>
void for_each_index(Exec policy, std::size_t n, Body&& body) {
#ifdef _OPENMP
  if (policy == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace gnep
