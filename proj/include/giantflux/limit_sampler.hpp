#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "giantflux/theory.hpp"

namespace giantflux {

/// One draw of the limit process on a lambda grid.
struct LimitPathSample {
  std::vector<double> lambdas;
  std::vector<double> x0;  // size coordinate
  std::vector<double> x1;  // volume coordinate; empty for the Brownian ER path
  std::uint64_t seed;
};

/// Joint draws of (Psi_0, Psi_1) at `times`.
///
/// Row r is draw r; columns are (Psi_0(t_1), Psi_1(t_1), Psi_0(t_2), ...).
/// Times must be distinct and non-negative.
Eigen::MatrixXd sample_psi_pair(const WeightModel& model, std::span<const double> times,
                                std::size_t count, std::uint64_t seed, unsigned threads = 1);

/// Covariance of (Psi_0, Psi_1) at `times` in the column order of sample_psi_pair.
Eigen::MatrixXd psi_covariance(const WeightModel& model, std::span<const double> times);

/// Draws of X on the curves' grid, assembled from Psi at the times lambda*theta(lambda).
std::vector<LimitPathSample> sample_x_path(const SupercriticalCurves& curves, std::size_t count,
                                           std::uint64_t seed, unsigned threads = 1);

/// Draws of B(v(lambda)) / u(lambda) for the Erdos-Renyi case.
///
/// Throws std::invalid_argument if v is not non-decreasing along the grid.
std::vector<LimitPathSample> er_brownian_path(std::span<const double> lambdas, std::size_t count,
                                              std::uint64_t seed);

}  // namespace giantflux
