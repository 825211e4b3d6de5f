#include <cmath>
#include <random>

#include "doctest.h"
#include "giantflux/weights.hpp"

using namespace giantflux;

namespace {

WeightModel two_point() { return WeightModel::discrete({{1.0, 0.5}, {2.0, 0.5}}); }

std::vector<WeightModel> sample_models() {
  return {WeightModel::constant(1.0), two_point(), WeightModel::discrete({{0.5, 0.8}, {3.0, 0.2}}),
          WeightModel::empirical({0.3, 1.7, 2.2, 0.9, 1.1})};
}

}  // namespace

TEST_CASE("model construction rejects invalid laws") {
  CHECK_THROWS_AS(WeightModel::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::discrete({{1.0, 0.5}, {2.0, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::discrete({{0.0, 0.5}, {2.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::discrete({}), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::empirical({}), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::empirical({1.0, -2.0}), std::invalid_argument);
  CHECK_NOTHROW(WeightModel::discrete({{1.0, 0.5}, {2.0, 0.5 + 5e-13}}));
}

TEST_CASE("mixed_moment examples") {
  CHECK(mixed_moment(WeightModel::constant(1.0), 2, 0.0) == 1.0);
  CHECK(mixed_moment(two_point(), 2, 0.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(mixed_moment(WeightModel::constant(1.0), 0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(mixed_moment(two_point(), 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mixed_moment(two_point(), 1, -0.1), std::invalid_argument);
}

TEST_CASE("phi examples") {
  for (double t : {0.1, 0.7, 2.0, 5.0}) {
    CHECK(phi(WeightModel::constant(1.0), 1, t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-15));
  }
  for (const auto& m : sample_models()) CHECK(phi(m, 0, 0.0) == 0.0);
  const double expected = 0.5 * (1.0 - std::exp(-1.0)) + (1.0 - std::exp(-2.0));
  CHECK(phi(two_point(), 1, 1.0) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(phi(two_point(), 1, 1.0) == doctest::Approx(1.180724996177666).epsilon(1e-14));
  CHECK_THROWS_AS(phi(two_point(), 2, 1.0), std::invalid_argument);
}

TEST_CASE("phi_prime examples") {
  CHECK(phi_prime(WeightModel::constant(1.0), 0, 0.0) == 1.0);
  CHECK(phi_prime(WeightModel::constant(1.0), 1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("phi is monotone, vanishes at zero and is bounded by E[W^p]") {
  for (const auto& m : sample_models()) {
    for (int p : {0, 1}) {
      double prev = 0.0;
      for (int k = 0; k < 100; ++k) {
        const double t = 0.1 * k;
        const double v = phi(m, p, t);
        CHECK(v >= prev);
        CHECK(v <= m.moment(p) + 1e-15);
        prev = v;
      }
      CHECK(phi(m, p, 0.0) == 0.0);
    }
  }
}

TEST_CASE("phi plus mixed moment recovers the plain moment") {
  for (const auto& m : sample_models()) {
    for (int p : {0, 1}) {
      for (double t : {0.0, 1e-8, 0.3, 1.0, 4.0, 30.0}) {
        CHECK(std::abs(phi(m, p, t) + mixed_moment(m, p, t) - m.moment(p)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("phi_prime matches a central finite difference") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick_model(0, 3);
  std::uniform_real_distribution<double> pick_t(0.05, 4.0);
  const auto models = sample_models();
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& m = models[static_cast<std::size_t>(pick_model(rng))];
    const double t = pick_t(rng);
    for (int p : {0, 1}) {
      const double fd = (phi(m, p, t + h) - phi(m, p, t - h)) / (2 * h);
      const double exact = phi_prime(m, p, t);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
    }
  }
}

TEST_CASE("quantile weight vectors") {
  const auto ones = sample_weight_vector(WeightModel::constant(1.0), 5, SampleMode::quantile, 99);
  CHECK(ones.weights == std::vector<double>{1, 1, 1, 1, 1});
  const auto v = sample_weight_vector(two_point(), 4, SampleMode::quantile, 0);
  CHECK(v.weights == std::vector<double>{1, 1, 2, 2});
  CHECK(v.provenance == WeightVector::Provenance::quantile);
  CHECK_THROWS_AS(sample_weight_vector(WeightModel::empirical({1.0}), 3, SampleMode::quantile, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_weight_vector(two_point(), 0, SampleMode::quantile, 0), std::invalid_argument);

  const auto skew = sample_weight_vector(WeightModel::discrete({{0.5, 0.8}, {3.0, 0.2}}), 10,
                                         SampleMode::quantile, 0);
  CHECK(std::count(skew.weights.begin(), skew.weights.end(), 0.5) == 8);
}

TEST_CASE("empirical law of a quantile vector reproduces the discrete law") {
  const auto models = {two_point(), WeightModel::discrete({{0.5, 0.8}, {3.0, 0.2}}),
                       WeightModel::discrete({{1.0, 0.25}, {2.0, 0.5}, {4.0, 0.25}})};
  for (const auto& m : models) {
    const auto v = sample_weight_vector(m, 1000, SampleMode::quantile, 0);
    const auto emp = WeightModel::empirical(v.weights);
    for (int p : {0, 1}) {
      for (double t : {0.1, 0.5, 1.0, 2.5}) {
        CHECK(std::abs(phi(emp, p, t) - phi(m, p, t)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("iid second moment is within 3 standard errors") {
  const auto m = WeightModel::discrete({{0.5, 0.8}, {3.0, 0.2}});
  const std::size_t n = 1000000;
  const auto v = sample_weight_vector(m, n, SampleMode::iid, 2024);
  CHECK(v.n() == n);
  double s = 0.0;
  for (double w : v.weights) s += w * w;
  const double emp = s / static_cast<double>(n);
  const double var_w2 = 0.8 * std::pow(0.5, 4) + 0.2 * std::pow(3.0, 4) - std::pow(m.moment(2), 2);
  CHECK(std::abs(emp - m.moment(2)) <= 3.0 * std::sqrt(var_w2 / static_cast<double>(n)));

  const auto again = sample_weight_vector(m, 100, SampleMode::iid, 2024);
  CHECK(again.weights == sample_weight_vector(m, 100, SampleMode::iid, 2024).weights);
}

TEST_CASE("assumption diagnostics") {
  const auto ones = WeightVector::explicit_values(std::vector<double>(100, 1.0));
  auto d = assumption_diagnostics(ones);
  CHECK(d.max_weight_sq_over_n == doctest::Approx(0.01));
  CHECK_FALSE(d.warning);

  std::vector<double> heavy(100, 1.0);
  heavy[0] = 10.0;
  d = assumption_diagnostics(WeightVector::explicit_values(heavy));
  CHECK(d.max_weight_sq_over_n == doctest::Approx(1.0));
  CHECK(d.warning);

  d = assumption_diagnostics(WeightVector::explicit_values({1, 1, 2, 2}));
  CHECK(d.second_moment == doctest::Approx(2.5));
}
