#include "giantflux/limit_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "giantflux/parallel.hpp"
#include "giantflux/random.hpp"

namespace giantflux {

namespace {

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("Psi times must be non-negative");
    for (std::size_t j = 0; j < i; ++j) {
      if (times[i] == times[j]) throw std::invalid_argument("Psi times must be distinct");
    }
  }
}

Eigen::MatrixXd draw(const Eigen::MatrixXd& factor, std::size_t count, std::uint64_t seed,
                     unsigned threads) {
  const auto dim = factor.rows();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), dim);
  parallel_for(count, threads, [&](std::size_t r) {
    Engine rng = make_engine(derive_seed(seed, {0x647261770ULL, r}));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(dim);
    for (Eigen::Index k = 0; k < dim; ++k) z[k] = normal(rng);
    out.row(static_cast<Eigen::Index>(r)) = (factor * z).transpose();
  });
  return out;
}

}  // namespace

Eigen::MatrixXd psi_covariance(const WeightModel& model, std::span<const double> times) {
  const auto m = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd cov(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          cov(2 * a + p, 2 * b + q) =
              psi_cov(model, p, q, times[static_cast<std::size_t>(a)], times[static_cast<std::size_t>(b)]);
        }
      }
    }
  }
  return cov;
}

Eigen::MatrixXd sample_psi_pair(const WeightModel& model, std::span<const double> times,
                                std::size_t count, std::uint64_t seed, unsigned threads) {
  check_times(times);
  const auto factor = factorize_psd(psi_covariance(model, times));
  return draw(factor.factor, count, seed, threads);
}

std::vector<LimitPathSample> sample_x_path(const SupercriticalCurves& curves, std::size_t count,
                                           std::uint64_t seed, unsigned threads) {
  const auto cov = x_cov(curves);  // coefficient table and PSD check

  // Distinct Psi times; lambda*theta(lambda) need not be monotone in lambda.
  std::vector<double> unique;
  std::vector<std::size_t> slot(cov.times.size());
  for (std::size_t i = 0; i < cov.times.size(); ++i) {
    const double t = cov.times[i];
    auto it = std::find_if(unique.begin(), unique.end(),
                           [t](double u) { return std::abs(u - t) <= 1e-14 * std::max(1.0, std::abs(t)); });
    if (it == unique.end()) {
      slot[i] = unique.size();
      unique.push_back(t);
    } else {
      slot[i] = static_cast<std::size_t>(it - unique.begin());
    }
  }
  const Eigen::MatrixXd psi = sample_psi_pair(curves.model, unique, count, seed, threads);

  std::vector<LimitPathSample> out(count);
  for (std::size_t r = 0; r < count; ++r) {
    auto& s = out[r];
    s.lambdas = cov.lambdas;
    s.seed = seed;
    s.x0.resize(cov.lambdas.size());
    s.x1.resize(cov.lambdas.size());
    for (std::size_t i = 0; i < cov.lambdas.size(); ++i) {
      const double psi0 = psi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(2 * slot[i]));
      const double psi1 = psi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(2 * slot[i] + 1));
      s.x0[i] = psi0 + cov.size_coeff[i] * psi1;
      s.x1[i] = cov.volume_coeff[i] * psi1;
    }
  }
  return out;
}

std::vector<LimitPathSample> er_brownian_path(std::span<const double> lambdas, std::size_t count,
                                              std::uint64_t seed) {
  std::vector<ErClosedForms> forms;
  forms.reserve(lambdas.size());
  for (double l : lambdas) forms.push_back(er_closed_forms(l));
  for (std::size_t i = 1; i < forms.size(); ++i) {
    if (forms[i].v < forms[i - 1].v) {
      throw std::invalid_argument("v(lambda) must be non-decreasing along the grid; sort the lambdas");
    }
  }
  std::vector<LimitPathSample> out(count);
  for (std::size_t r = 0; r < count; ++r) {
    Engine rng = make_engine(derive_seed(seed, {0x62726f776eULL, r}));
    std::normal_distribution<double> normal(0.0, 1.0);
    auto& s = out[r];
    s.lambdas.assign(lambdas.begin(), lambdas.end());
    s.seed = seed;
    double b = 0.0;
    double v_prev = 0.0;
    for (const auto& f : forms) {
      b += std::sqrt(f.v - v_prev) * normal(rng);
      v_prev = f.v;
      s.x0.push_back(b / f.u);
    }
  }
  return out;
}

}  // namespace giantflux
