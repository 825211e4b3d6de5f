#pragma once

#include <span>

namespace giantflux::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);

double mean_se(std::span<const double> x);

/// Standard error of the sample variance.
///
/// Larger of the normal-theory value s^2 sqrt(2/(R-1)) and the
/// kurtosis-robust sqrt((m4 - s^4 (R-3)/(R-1)) / R).
double variance_se(std::span<const double> x);

/// sqrt((mean((x-xbar)^2 (y-ybar)^2) - c^2) / R).
double covariance_se(std::span<const double> x, std::span<const double> y);

/// Linear-interpolation quantile (R type 7), q in [0,1].
double quantile(std::span<const double> x, double q);

}  // namespace giantflux::stats
