#include "giantflux/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "giantflux/numeric.hpp"
#include "giantflux/random.hpp"

namespace giantflux {

namespace {

// Levels closer than this are treated as a re-hit of the running infimum.
double level_tolerance(double level) { return 1e-12 * (1.0 + std::abs(level)); }

}  // namespace

WalkRealization::WalkRealization(WeightVector weights, std::vector<double> clocks)
    : weights_(std::move(weights)), clocks_(std::move(clocks)) {
  const std::size_t n = weights_.n();
  if (n == 0) throw std::invalid_argument("walk needs at least one vertex");
  if (clocks_.size() != n) throw std::invalid_argument("one clock per vertex is required");
  for (double c : clocks_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("clocks must be positive");
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return clocks_[a] < clocks_[b]; });

  sorted_clocks_.resize(n);
  std::vector<double> masses(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted_clocks_[k] = clocks_[order_[k]];
    masses[k] = weights_.weights[order_[k]] * inv_n;
  }
  mass_prefix_ = compensated_prefix_sums(masses);
}

WalkRealization sample_clocks(const WeightVector& w, std::uint64_t seed) {
  Engine rng = make_engine(derive_seed(seed, {0x636c6f636bULL}));
  std::exponential_distribution<double> unit(1.0);
  std::vector<double> clocks(w.n());
  for (std::size_t j = 0; j < w.n(); ++j) {
    double e = unit(rng);
    while (!(e > 0.0)) e = unit(rng);
    clocks[j] = e / w.weights[j];
  }
  return WalkRealization{w, std::move(clocks)};
}

std::vector<Excursion> excursions(const WalkRealization& r, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const auto clocks = r.sorted_clocks();
  const auto mass = r.mass_prefix();
  const std::size_t n = r.n();

  std::vector<Excursion> out;
  std::size_t start = 0;
  double g = clocks[0] / lambda;
  double level = -g;  // H(g-) = mass_prefix[0] - g
  for (std::size_t k = 1; k < n; ++k) {
    const double tau = clocks[k] / lambda;
    // H(tau-) relative to the level; equals d_current - tau.
    const double before = mass[k] - tau;
    if (before - level <= level_tolerance(level)) {
      out.push_back({g, g + (mass[k] - mass[start]), start, k - 1});
      start = k;
      g = tau;
      level = before;
    }
  }
  out.push_back({g, g + (mass[n] - mass[start]), start, n - 1});
  return out;
}

ExcursionResult longest_excursion(const WalkRealization& r, double lambda) {
  const auto all = excursions(r, lambda);
  const Excursion* best = &all.front();
  for (const auto& e : all) {
    const double len = best->length();
    if (e.length() > len + 1e-12 * (1.0 + len)) best = &e;
  }
  double volume = 0.0;
  for (std::size_t k = best->first; k <= best->last; ++k) volume += r.weights().weights[r.order()[k]];
  const std::size_t count = best->last - best->first + 1;
  return {best->g,
          best->d,
          best->d - best->g,
          static_cast<double>(count) / static_cast<double>(r.n()),
          count,
          volume};
}

double walk_value(const WalkRealization& r, double lambda, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("walk time must be >= 0");
  const auto clocks = r.sorted_clocks();
  const auto it = std::partition_point(clocks.begin(), clocks.end(),
                                       [&](double c) { return c / lambda <= t; });
  return r.mass_prefix()[static_cast<std::size_t>(it - clocks.begin())] - t;
}

std::size_t clock_window_count(const WalkRealization& r, double lambda, double lo, double hi) {
  const auto clocks = r.sorted_clocks();
  const auto a = std::partition_point(clocks.begin(), clocks.end(),
                                      [&](double c) { return c / lambda < lo; });
  const auto b = std::partition_point(clocks.begin(), clocks.end(),
                                      [&](double c) { return c / lambda <= hi; });
  return b > a ? static_cast<std::size_t>(b - a) : 0;
}

GiantPath sweep(const WalkRealization& r, std::span<const double> lambdas,
                const SupercriticalCurves& empirical_curves) {
  if (empirical_curves.points.size() != lambdas.size()) {
    throw std::invalid_argument("curves and lambda grid have different lengths");
  }
  const double n = static_cast<double>(r.n());
  const double root_n = std::sqrt(n);
  GiantPath path;
  path.points.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto& pt = empirical_curves.points[i];
    if (pt.lambda != lambdas[i]) throw std::invalid_argument("curves were tabulated on another grid");
    const auto giant = longest_excursion(r, lambdas[i]);
    path.points.push_back({lambdas[i], giant,
                           (static_cast<double>(giant.vertex_count) - pt.rho * n) / root_n,
                           (giant.total_volume - pt.theta * n) / root_n});
  }
  return path;
}

SupercriticalCurves empirical_curves(const WeightVector& w, std::span<const double> lambdas,
                                     double margin) {
  const auto model = WeightModel::empirical(w.weights);
  require_supercritical(model, lambdas, margin);
  return tabulate_curves(model, lambdas);
}

}  // namespace giantflux
