#include "giantflux/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "giantflux/numeric.hpp"
#include "giantflux/random.hpp"

namespace giantflux {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double power(double w, int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return w;
    default: return w * w;
  }
}

void check_order(int k) {
  if (k < 0 || k > 2) {
    throw std::invalid_argument("moment order must be 0, 1 or 2, got " + std::to_string(k));
  }
}

void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time argument must be >= 0");
}

}  // namespace

WeightModel WeightModel::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("constant weight must be a finite positive number");
  }
  return WeightModel{Constant{c}};
}

WeightModel WeightModel::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("discrete weight law needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("discrete atom weights must be finite and positive");
    }
    if (!(a.probability > 0.0 && a.probability <= 1.0)) {
      throw std::invalid_argument("discrete atom probabilities must lie in (0,1]");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "discrete probabilities sum to " << total << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.weight < b.weight; });
  return WeightModel{Discrete{std::move(atoms)}};
}

WeightModel WeightModel::empirical(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("empirical weight vector is empty");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("empirical weights must be finite and positive");
    }
  }
  return WeightModel{Empirical{std::move(weights)}};
}

double WeightModel::moment(int k) const {
  check_order(k);
  return expectation(*this, [k](double w) { return power(w, k); });
}

double WeightModel::max_weight() const {
  return std::visit(overloaded{
                        [](const Constant& m) { return m.c; },
                        [](const Discrete& m) { return m.atoms.back().weight; },
                        [](const Empirical& m) {
                          return *std::max_element(m.weights.begin(), m.weights.end());
                        },
                    },
                    form_);
}

std::string WeightModel::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Constant& m) { out << "Constant(" << m.c << ")"; },
                 [&](const Discrete& m) {
                   out << "Discrete{";
                   for (std::size_t i = 0; i < m.atoms.size(); ++i) {
                     out << (i ? "," : "") << "(" << m.atoms[i].weight << ","
                         << m.atoms[i].probability << ")";
                   }
                   out << "}";
                 },
                 [&](const Empirical& m) { out << "Empirical(n=" << m.weights.size() << ")"; },
             },
             form_);
  return out.str();
}

double WeightVector::total() const { return pairwise_sum(weights); }

WeightVector WeightVector::explicit_values(std::vector<double> weights) {
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("weight vector entries must be finite and positive");
    }
  }
  return WeightVector{std::move(weights), Provenance::explicit_values, 0};
}

double mixed_moment(const WeightModel& model, int k, double t) {
  check_order(k);
  check_time(t);
  return expectation(model, [k, t](double w) { return power(w, k) * std::exp(-w * t); });
}

double phi(const WeightModel& model, int p, double t) {
  if (p != 0 && p != 1) throw std::invalid_argument("phi is defined for p in {0,1}");
  check_time(t);
  return expectation(model, [p, t](double w) { return -power(w, p) * std::expm1(-w * t); });
}

double phi_prime(const WeightModel& model, int p, double t) {
  if (p != 0 && p != 1) throw std::invalid_argument("phi_prime is defined for p in {0,1}");
  return mixed_moment(model, p + 1, t);
}

WeightVector sample_weight_vector(const WeightModel& model, std::size_t n, SampleMode mode,
                                  std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("weight vector length must be >= 1");
  WeightVector out;
  out.seed = seed;
  out.weights.resize(n);

  if (mode == SampleMode::quantile) {
    if (model.is_empirical()) {
      throw std::invalid_argument("quantile mode is undefined for empirical weight models");
    }
    out.provenance = WeightVector::Provenance::quantile;
    if (const auto* c = std::get_if<WeightModel::Constant>(&model.form())) {
      std::fill(out.weights.begin(), out.weights.end(), c->c);
      return out;
    }
    const auto& atoms = std::get<WeightModel::Discrete>(model.form()).atoms;
    std::vector<double> cdf(atoms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) cdf[i] = (acc += atoms[i].probability);
    for (std::size_t j = 0; j < n; ++j) {
      const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::size_t idx =
          it == cdf.end() ? atoms.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
      out.weights[j] = atoms[idx].weight;
    }
    return out;
  }

  out.provenance = WeightVector::Provenance::iid_sample;
  Engine rng = make_engine(derive_seed(seed, {0x77656967ULL}));
  std::visit(overloaded{
                 [&](const WeightModel::Constant& m) {
                   std::fill(out.weights.begin(), out.weights.end(), m.c);
                 },
                 [&](const WeightModel::Discrete& m) {
                   std::vector<double> probs;
                   for (const auto& a : m.atoms) probs.push_back(a.probability);
                   std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
                   for (auto& w : out.weights) w = m.atoms[pick(rng)].weight;
                 },
                 [&](const WeightModel::Empirical& m) {
                   std::uniform_int_distribution<std::size_t> pick(0, m.weights.size() - 1);
                   for (auto& w : out.weights) w = m.weights[pick(rng)];
                 },
             },
             model.form());
  return out;
}

AssumptionDiagnostics assumption_diagnostics(const WeightVector& v) {
  if (v.weights.empty()) return {0.0, 0.0, false};
  std::vector<double> squares(v.weights.size());
  std::transform(v.weights.begin(), v.weights.end(), squares.begin(),
                 [](double w) { return w * w; });
  const double n = static_cast<double>(v.n());
  const double max_sq = *std::max_element(squares.begin(), squares.end());
  const double ratio = max_sq / n;
  return {pairwise_sum(squares) / n, ratio, ratio > 0.01};
}

}  // namespace giantflux
