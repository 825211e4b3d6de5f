#include "giantflux/graph_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "giantflux/random.hpp"

namespace giantflux {

namespace {

void sort_arrivals(std::vector<EdgeArrival>& edges) {
  std::sort(edges.begin(), edges.end(), [](const EdgeArrival& a, const EdgeArrival& b) {
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
}

}  // namespace

DynamicGraphRealization DynamicGraphRealization::from_arrivals(WeightVector weights,
                                                               std::vector<EdgeArrival> edges) {
  const std::size_t n = weights.n();
  if (edges.size() != n * (n - 1) / 2) {
    throw std::invalid_argument("expected n(n-1)/2 = " + std::to_string(n * (n - 1) / 2) +
                                " arrivals, got " + std::to_string(edges.size()));
  }
  std::vector<char> seen(n * n, 0);
  for (const auto& e : edges) {
    if (e.i >= e.j || e.j >= n) throw std::invalid_argument("edge endpoints must satisfy i < j < n");
    if (!(e.arrival > 0.0)) throw std::invalid_argument("arrivals must be positive");
    char& flag = seen[static_cast<std::size_t>(e.i) * n + e.j];
    if (flag) throw std::invalid_argument("duplicate edge in arrival list");
    flag = 1;
  }
  sort_arrivals(edges);
  return DynamicGraphRealization{std::move(weights), std::move(edges)};
}

DynamicGraphRealization simulate_dynamic_graph(const WeightVector& w, std::uint64_t seed,
                                               std::size_t cap) {
  const std::size_t n = w.n();
  if (n > cap) {
    throw std::invalid_argument("graph oracle size " + std::to_string(n) + " exceeds cap " +
                                std::to_string(cap));
  }
  Engine rng = make_engine(derive_seed(seed, {0x6564676573ULL}));
  std::exponential_distribution<double> unit(1.0);
  std::vector<EdgeArrival> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double e = unit(rng);
      while (!(e > 0.0)) e = unit(rng);
      edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                       e / (w.weights[i] * w.weights[j])});
    }
  }
  sort_arrivals(edges);
  return DynamicGraphRealization{w, std::move(edges)};
}

ComponentTracker::ComponentTracker(std::span<const double> weights)
    : parent_(weights.size()), size_(weights.size(), 1), volume_(weights.begin(), weights.end()) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t ComponentTracker::find(std::size_t v) {
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

void ComponentTracker::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  volume_[a] += volume_[b];
}

std::vector<ComponentTracker::Component> ComponentTracker::components() {
  std::vector<Component> out;
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    if (find(v) == v) out.push_back({v, size_[v], volume_[v]});
  }
  return out;
}

ComponentTracker::Component ComponentTracker::most_voluminous() {
  // Scanning vertices in index order makes the first component met on a tie
  // the one that holds the smallest vertex.
  std::size_t best = find(0);
  for (std::size_t v = 1; v < parent_.size(); ++v) {
    const std::size_t root = find(v);
    const double cur = volume_[best];
    if (volume_[root] > cur + 1e-12 * (1.0 + cur)) best = root;
  }
  return {best, size_[best], volume_[best]};
}

std::vector<GiantSnapshot> giant_path(const DynamicGraphRealization& r,
                                      std::span<const double> lambdas) {
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
    throw std::invalid_argument("graph oracle lambda grid must be ascending");
  }
  const std::size_t n = r.n();
  ComponentTracker tracker(r.weights().weights);
  const auto edges = r.edges();
  std::size_t next = 0;
  std::vector<GiantSnapshot> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const double threshold = lambda / static_cast<double>(n);
    while (next < edges.size() && edges[next].arrival <= threshold) {
      tracker.unite(edges[next].i, edges[next].j);
      ++next;
    }
    const auto giant = tracker.most_voluminous();
    out.push_back({lambda, giant.size, giant.volume});
  }
  return out;
}

}  // namespace giantflux
