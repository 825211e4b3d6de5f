#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "giantflux/numeric.hpp"

namespace giantflux {

/// One atom of a finitely supported weight law.
struct Atom {
  double weight;
  double probability;
};

/// Distribution of the weight W of a uniformly chosen vertex.
///
/// Three forms are supported: a point mass, a finite discrete law and the
/// empirical law of an explicit weight vector (the finite-n W_n). All
/// expectations are finite sums, so every moment is exact up to rounding.
class WeightModel {
 public:
  struct Constant {
    double c;
  };
  struct Discrete {
    std::vector<Atom> atoms;  // sorted by weight
  };
  struct Empirical {
    std::vector<double> weights;
  };

  static WeightModel constant(double c);
  static WeightModel discrete(std::vector<Atom> atoms);
  static WeightModel empirical(std::vector<double> weights);

  const std::variant<Constant, Discrete, Empirical>& form() const noexcept { return form_; }
  bool is_constant() const noexcept { return std::holds_alternative<Constant>(form_); }
  bool is_discrete() const noexcept { return std::holds_alternative<Discrete>(form_); }
  bool is_empirical() const noexcept { return std::holds_alternative<Empirical>(form_); }

  /// E[W^k] for k in {0,1,2}.
  double moment(int k) const;
  double max_weight() const;
  std::string describe() const;

 private:
  explicit WeightModel(std::variant<Constant, Discrete, Empirical> form) : form_(std::move(form)) {}
  std::variant<Constant, Discrete, Empirical> form_;
};

enum class SampleMode { iid, quantile };

struct WeightVector {
  enum class Provenance { iid_sample, quantile, explicit_values };

  std::vector<double> weights;
  Provenance provenance = Provenance::explicit_values;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return weights.size(); }
  double total() const;

  static WeightVector explicit_values(std::vector<double> weights);
};

/// E[g(W)] as a finite sum; empirical laws use pairwise summation.
template <typename G>
double expectation(const WeightModel& model, G&& g) {
  const auto& form = model.form();
  if (const auto* c = std::get_if<WeightModel::Constant>(&form)) return g(c->c);
  if (const auto* d = std::get_if<WeightModel::Discrete>(&form)) {
    double s = 0.0;
    for (const auto& a : d->atoms) s += a.probability * g(a.weight);
    return s;
  }
  const auto& w = std::get<WeightModel::Empirical>(form).weights;
  std::vector<double> terms(w.size());
  std::transform(w.begin(), w.end(), terms.begin(), g);
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

/// E[W^k e^{-W t}], k in {0,1,2}, t >= 0.
double mixed_moment(const WeightModel& model, int k, double t);

/// phi_p(t) = E[W^p (1 - e^{-W t})], p in {0,1}.
double phi(const WeightModel& model, int p, double t);

/// d/dt phi_p(t) = E[W^{p+1} e^{-W t}].
double phi_prime(const WeightModel& model, int p, double t);

/// Weight vector of length n drawn from `model`.
///
/// `iid` draws independent samples. `quantile` returns w_j = F^{-1}((j - 1/2)/n)
/// and is only defined for constant and discrete laws.
WeightVector sample_weight_vector(const WeightModel& model, std::size_t n, SampleMode mode,
                                  std::uint64_t seed);

struct AssumptionDiagnostics {
  double second_moment;
  double max_weight_sq_over_n;
  bool warning;  // max_j w_j^2 / n > 0.01
};

AssumptionDiagnostics assumption_diagnostics(const WeightVector& v);

}  // namespace giantflux
