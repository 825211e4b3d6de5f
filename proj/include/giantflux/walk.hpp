#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "giantflux/theory.hpp"
#include "giantflux/weights.hpp"

namespace giantflux {

/// One draw of the exponential clocks xi_j ~ Exp(w_j).
///
/// The walk H(t, lambda) = X_{n,1}(lambda t) - t jumps by w_j / n at time
/// xi_j / lambda. Clock order does not depend on lambda, so the sort and the
/// prefix masses are computed once and shared by every lambda.
class WalkRealization {
 public:
  WalkRealization(WeightVector weights, std::vector<double> clocks);

  std::size_t n() const noexcept { return weights_.n(); }
  const WeightVector& weights() const noexcept { return weights_; }
  std::span<const double> clocks() const noexcept { return clocks_; }
  /// order()[k] is the vertex with the k-th smallest clock.
  std::span<const std::size_t> order() const noexcept { return order_; }
  std::span<const double> sorted_clocks() const noexcept { return sorted_clocks_; }
  /// mass_prefix()[k] = (1/n) * sum of the first k weights in clock order.
  std::span<const double> mass_prefix() const noexcept { return mass_prefix_; }
  double total_mass() const noexcept { return mass_prefix_.back(); }

 private:
  WeightVector weights_;
  std::vector<double> clocks_;
  std::vector<std::size_t> order_;
  std::vector<double> sorted_clocks_;
  std::vector<double> mass_prefix_;
};

/// Draws xi_j = E_j / w_j with E_j standard exponential; deterministic in seed.
WalkRealization sample_clocks(const WeightVector& w, std::uint64_t seed);

/// Excursion of H above its running infimum, by clock-order jump indices.
struct Excursion {
  double g;
  double d;
  std::size_t first;  // first jump (at time g)
  std::size_t last;   // last jump before d
  double length() const noexcept { return d - g; }
};

struct ExcursionResult {
  double g;
  double d;
  double scaled_volume;   // d - g = V / n
  double count_fraction;  // L / n
  std::size_t vertex_count;
  double total_volume;  // sum of the weights of the excursion's vertices
};

/// Every excursion of H(., lambda), left to right.
std::vector<Excursion> excursions(const WalkRealization& r, double lambda);

/// First longest excursion of H(., lambda), with L = #{j : lambda g <= xi_j <= lambda d}.
ExcursionResult longest_excursion(const WalkRealization& r, double lambda);

/// H(t, lambda) = X_{n,1}(lambda t) - t by binary search over the sorted clocks.
double walk_value(const WalkRealization& r, double lambda, double t);

/// Number of clocks with lambda * lo <= xi_j <= lambda * hi, compared in time units.
std::size_t clock_window_count(const WalkRealization& r, double lambda, double lo, double hi);

struct GiantPathPoint {
  double lambda;
  ExcursionResult giant;
  double fluc_size;    // (L - rho_n n) / sqrt(n)
  double fluc_volume;  // (V - theta_n n) / sqrt(n)
};

struct GiantPath {
  std::vector<GiantPathPoint> points;
};

/// Giant statistics on a lambda grid from one realization.
///
/// `empirical_curves` must be computed from the realization's own weight
/// vector; the fluctuations are centred by those finite-n curves.
GiantPath sweep(const WalkRealization& r, std::span<const double> lambdas,
                const SupercriticalCurves& empirical_curves);

/// Curves of the empirical law of `w` on `lambdas`, after checking the margin.
SupercriticalCurves empirical_curves(const WeightVector& w, std::span<const double> lambdas,
                                     double margin = kDefaultSupercriticalMargin);

}  // namespace giantflux
