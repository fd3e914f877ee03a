#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pogit {

/// Caps OpenMP worker counts for all kernels. 0 restores the runtime default.
inline void set_max_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Splits [0, n) into fixed-size chunks, maps each chunk to a partial result
/// in parallel, then folds the partials serially in chunk order. Because the
/// chunk boundaries depend only on (n, chunk_size), the reduction order — and
/// therefore the floating-point result — is identical for any thread count.
///
/// Map:    Partial(std::int64_t begin, std::int64_t end, std::size_t chunk_idx)
/// Reduce: void(Partial& acc, Partial&& part)
template <typename Partial, typename Map, typename Reduce>
Partial chunked_reduce(std::int64_t n, std::int64_t chunk_size, Map map,
                       Reduce reduce) {
  const std::int64_t n_chunks =
      n <= 0 ? 0 : (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> parts(static_cast<std::size_t>(n_chunks > 0 ? n_chunks : 0));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n_chunks > 1)
#endif
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t begin = c * chunk_size;
    const std::int64_t end = begin + chunk_size < n ? begin + chunk_size : n;
    parts[static_cast<std::size_t>(c)] =
        map(begin, end, static_cast<std::size_t>(c));
  }
  Partial acc{};
  for (auto& p : parts) reduce(acc, std::move(p));
  return acc;
}

}  // namespace pogit
