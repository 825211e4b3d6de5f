#include "giantflux/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "giantflux/numeric.hpp"

namespace giantflux::stats {

namespace {

void need(std::span<const double> x, std::size_t k) {
  if (x.size() < k) throw std::invalid_argument("not enough samples for this statistic");
}

}  // namespace

double mean(std::span<const double> x) {
  need(x, 1);
  return pairwise_sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  return covariance(x, x);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  need(x, 2);
  if (x.size() != y.size()) throw std::invalid_argument("covariance needs equal-length samples");
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return pairwise_sum(prod) / static_cast<double>(x.size() - 1);
}

double mean_se(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

double variance_se(std::span<const double> x) {
  need(x, 4);
  const double r = static_cast<double>(x.size());
  const double s2 = variance(x);
  const double mx = mean(x);
  std::vector<double> fourth(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fourth[i] = std::pow(x[i] - mx, 4);
  const double m4 = pairwise_sum(fourth) / r;
  const double normal = s2 * std::sqrt(2.0 / (r - 1.0));
  const double robust_sq = (m4 - s2 * s2 * (r - 3.0) / (r - 1.0)) / r;
  const double robust = robust_sq > 0.0 ? std::sqrt(robust_sq) : 0.0;
  return std::max(normal, robust);
}

double covariance_se(std::span<const double> x, std::span<const double> y) {
  need(x, 2);
  const double r = static_cast<double>(x.size());
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = (x[i] - mx) * (y[i] - my);
    sq[i] = p * p;
  }
  const double c = covariance(x, y);
  const double v = (pairwise_sum(sq) / r - c * c) / r;
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

double quantile(std::span<const double> x, double q) {
  need(x, 1);
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0,1]");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace giantflux::stats
