#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locflow::par {

int max_threads();
void set_threads(int n);

template <class F>
inline void for_each(std::int64_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) f(i);
#else
  for (std::int64_t i = 0; i < n; ++i) f(i);
#endif
}

// Fixed block size for deterministic reductions. Blocks are accumulated
// serially and partials combined in index order, so the result does not
// depend on the thread count.
inline constexpr std::int64_t kSumBlock = 4096;

template <class F>
inline double sum(std::int64_t n, F&& f) {
  if (n <= 0) return 0.0;
  const std::int64_t nb = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(static_cast<std::size_t>(nb));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::int64_t lo = b * kSumBlock;
    const std::int64_t hi = std::min(n, lo + kSumBlock);
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

// Max/min are associative and commutative in floating point, so an OpenMP
// reduction is already thread-count independent.
template <class F>
inline double max(std::int64_t n, F&& f) {
  double m = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
  for (std::int64_t i = 0; i < n; ++i) m = std::max(m, f(i));
  return m;
}

template <class F>
inline double min(std::int64_t n, F&& f) {
  double m = std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : m)
#endif
  for (std::int64_t i = 0; i < n; ++i) m = std::min(m, f(i));
  return m;
}

template <class F>
inline bool all_of(std::int64_t n, F&& f) {
  int ok = 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(& : ok)
#endif
  for (std::int64_t i = 0; i < n; ++i) ok &= f(i) ? 1 : 0;
  return ok != 0;
}

} // namespace locflow::par
