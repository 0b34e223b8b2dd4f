#ifndef NEHARI_REDUCTION_HPP_
#define NEHARI_REDUCTION_HPP_

#include <algorithm>
#include <cstdlib>
#include <span>
#include <thread>
#include <vector>

namespace nehari {

/// Number of worker threads for row reductions: NEHARI_FPL_THREADS if set
/// and positive (at most 64), otherwise the hardware concurrency.
int reduction_width();

/// Rows below this count are always processed on the calling thread.
inline constexpr int kParallelRowThreshold = 384;

/// Evaluates row(i) for i in [0,n) into out[i]. Rows go to workers
/// round-robin; each slot is computed by the same arithmetic no matter how
/// many threads run.
template <typename RowFn>
void evaluate_rows(int n, std::span<double> out, RowFn&& row) {
  const int width = n < kParallelRowThreshold ? 1 : std::min(reduction_width(), n / 64);
  if (width <= 1) {
    for (int i = 0; i < n; ++i) out[i] = row(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(width);
  for (int w = 0; w < width; ++w) {
    workers.emplace_back([&, w] {
      for (int i = w; i < n; i += width) out[i] = row(i);
    });
  }
}

/// Sum in index order; this is the only place row partials are combined.
inline double ordered_sum(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

}  // namespace nehari

#endif  // NEHARI_REDUCTION_HPP_
