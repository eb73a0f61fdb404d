#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlc {

/// Set the worker thread count for all parallel kernels (0 = runtime default).
void set_threads(int n);
int thread_count();

namespace detail {

// Deterministic parallel reduction: the index range is split into fixed-size
// chunks, each chunk is summed serially, and the chunk partials are combined
// in chunk order. The result is bit-identical for any thread count.
inline constexpr std::int64_t kReduceChunk = 8192;

template <class F>
double parallel_sum(std::int64_t n, F&& term) {
  if (n <= 0) return 0.0;
  const std::int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (nchunks > 1)
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * kReduceChunk;
    const std::int64_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class F>
double parallel_max(std::int64_t n, F&& term) {
  if (n <= 0) return 0.0;
  const std::int64_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (nchunks > 1)
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * kReduceChunk;
    const std::int64_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
    double m = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double v = term(i);
      if (v > m) m = v;
    }
    partial[static_cast<std::size_t>(c)] = m;
  }
  double total = 0.0;
  for (double p : partial) total = p > total ? p : total;
  return total;
}

}  // namespace detail
}  // namespace nlc
