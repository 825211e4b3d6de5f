#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "giantflux/weights.hpp"

namespace giantflux {

inline constexpr std::size_t kDefaultGraphCap = 2000;

struct EdgeArrival {
  std::uint32_t i;  // i < j
  std::uint32_t j;
  double arrival;   // E_ij ~ Exp(w_i w_j); edge present at lambda iff arrival <= lambda / n
};

/// All n(n-1)/2 edge arrival times of the dynamic rank-one graph, ascending.
class DynamicGraphRealization {
 public:
  /// Test hook: explicit arrivals, validated and sorted.
  static DynamicGraphRealization from_arrivals(WeightVector weights, std::vector<EdgeArrival> edges);

  std::size_t n() const noexcept { return weights_.n(); }
  const WeightVector& weights() const noexcept { return weights_; }
  std::span<const EdgeArrival> edges() const noexcept { return edges_; }

 private:
  friend DynamicGraphRealization simulate_dynamic_graph(const WeightVector&, std::uint64_t,
                                                        std::size_t);
  DynamicGraphRealization(WeightVector weights, std::vector<EdgeArrival> edges)
      : weights_(std::move(weights)), edges_(std::move(edges)) {}

  WeightVector weights_;
  std::vector<EdgeArrival> edges_;
};

/// Throws std::invalid_argument when n exceeds `cap`.
DynamicGraphRealization simulate_dynamic_graph(const WeightVector& w, std::uint64_t seed,
                                               std::size_t cap = kDefaultGraphCap);

struct GiantSnapshot {
  double lambda;
  std::size_t size;  // L: vertices in the most voluminous component
  double volume;     // V
};

/// Union by size with path halving; every root carries its vertex count and volume.
class ComponentTracker {
 public:
  explicit ComponentTracker(std::span<const double> weights);

  std::size_t find(std::size_t v);
  void unite(std::size_t a, std::size_t b);

  struct Component {
    std::size_t root;
    std::size_t size;
    double volume;
  };
  /// One entry per component, ordered by root index.
  std::vector<Component> components();
  /// Largest volume; ties go to the component holding the smallest vertex.
  Component most_voluminous();

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<double> volume_;
};

/// Giant snapshots on an ascending grid, in one pass over the arrivals.
std::vector<GiantSnapshot> giant_path(const DynamicGraphRealization& r,
                                      std::span<const double> lambdas);

}  // namespace giantflux
