#pragma once

// Execution policy for the pointwise and line kernels. Every kernel has a
// serial reference path and an OpenMP path; both produce bit-identical
// results because work items are independent and reductions are blocked
// with a fixed block size and summed in order.

#include <cstddef>
#include <vector>

#include <omp.h>

namespace chess {

enum class Exec { serial, parallel };

/// Caps the OpenMP team size used by Exec::parallel kernels.
inline void set_num_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

inline int num_threads() { return omp_get_max_threads(); }

template <class Fn>
void for_each_index(Exec exec, std::size_t count, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

inline constexpr std::size_t kReduceBlock = 4096;

/// Deterministic sum of term(i) for i < count, independent of thread count.
template <class Fn>
double blocked_sum(Exec exec, std::size_t count, Fn&& term) {
  const std::size_t blocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(blocks, 0.0);
  for_each_index(exec, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = lo + kReduceBlock < count ? lo + kReduceBlock : count;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace chess
