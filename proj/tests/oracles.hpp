#pragma once

// Test-only reference implementations. They share no code with the library
// paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace giantflux::testing {

struct BruteExcursion {
  double g;
  double d;
  std::size_t count;
  double volume;
};

// Longest excursion of H(t) = sum_j (w_j/n) 1[xi_j <= lambda t] - t, found by
// evaluating H with naive O(n) sums at every jump time and following each
// unit-slope descent to its crossing of the running infimum.
inline BruteExcursion brute_longest_excursion(const std::vector<double>& w,
                                              const std::vector<double>& clocks, double lambda) {
  const std::size_t n = w.size();
  const double dn = static_cast<double>(n);
  std::vector<double> times(n);
  for (std::size_t j = 0; j < n; ++j) times[j] = clocks[j] / lambda;
  auto h_left = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += times[j] < t ? w[j] / dn : 0.0;
    return s - t;
  };
  auto h_right = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += times[j] <= t ? w[j] / dn : 0.0;
    return s - t;
  };
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());

  struct Interval {
    double g;
    double d;
  };
  std::vector<Interval> found;
  double running_min = std::numeric_limits<double>::infinity();
  double level = 0.0;
  double g = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double left = h_left(sorted[k]);
    const bool starts = k == 0 || left - running_min <= 1e-12 * (1.0 + std::abs(running_min));
    if (starts) {
      if (k > 0) found.push_back({g, sorted[k - 1] + h_right(sorted[k - 1]) - level});
      g = sorted[k];
      level = left;
    }
    running_min = std::min(running_min, left);
  }
  found.push_back({g, sorted[n - 1] + h_right(sorted[n - 1]) - level});

  Interval best = found.front();
  for (const auto& e : found) {
    const double len = best.d - best.g;
    if (e.d - e.g > len + 1e-12 * (1.0 + len)) best = e;
  }
  BruteExcursion out{best.g, best.d, 0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (times[j] >= best.g && times[j] <= best.d) {
      ++out.count;
      out.volume += w[j];
    }
  }
  return out;
}

}  // namespace giantflux::testing
