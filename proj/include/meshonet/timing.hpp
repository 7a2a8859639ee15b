#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

namespace meshonet {

template <class F>
double time_once(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Benchmark timing: one warmup, then the median of 5 runs. Runs longer than
// a second are measured once; their relative noise is already small and five
// repetitions of a multi-minute solve would dominate the suite.
template <class F>
double median_time(F&& f) {
  const double warmup = time_once(f);
  if (warmup > 1.0) return warmup;
  std::vector<double> runs(5);
  for (auto& r : runs) r = time_once(f);
  std::sort(runs.begin(), runs.end());
  return runs[2];
}

}  // namespace meshonet
