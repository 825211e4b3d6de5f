#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace giantflux {

/// Pairwise (tree) summation; rounding error grows like O(log n) ulps.
double pairwise_sum(std::span<const double> values);

/// Running Neumaier-compensated sums: out[0] = 0, out[k] = x[0] + ... + x[k-1].
std::vector<double> compensated_prefix_sums(std::span<const double> values);

}  // namespace giantflux

#include <string>

namespace giantflux {

/// Shortest-form decimal with 17 significant digits ("nan", "inf" for non-finite).
std::string format_real(double x);

/// Shortest decimal that round-trips, for diagnostics.
std::string shortest_real(double x);

}  // namespace giantflux
