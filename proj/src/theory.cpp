#include "giantflux/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "giantflux/numeric.hpp"

namespace giantflux {

namespace {

constexpr int kMaxBisectionSteps = 200;

// Bisection for a sign change of `f` with f(lo) > 0 >= f(hi). Stops when the
// bracket is narrower than `tolerance` or cannot be split further.
template <typename F>
double bisect(F&& f, double lo, double hi, double tolerance) {
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tolerance || mid <= lo || mid >= hi) return mid;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("bisection did not converge within 200 steps");
}

}  // namespace

double lambda_crit(const WeightModel& model) {
  const double m2 = model.moment(2);
  if (!(m2 > 0.0)) throw std::domain_error("weight model has zero second moment");
  return 1.0 / m2;
}

double theta(const WeightModel& model, double lambda, double tolerance) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (lambda * model.moment(2) <= 1.0) return 0.0;

  const double mean = model.moment(1);
  auto slope = [&](double t) { return lambda * phi_prime(model, 1, lambda * t) - 1.0; };
  auto excess = [&](double t) { return phi(model, 1, lambda * t) - t; };

  const double peak = bisect(slope, 0.0, mean, tolerance);
  return bisect(excess, peak, mean, tolerance);
}

double rho(const WeightModel& model, double lambda) {
  return phi(model, 0, lambda * theta(model, lambda));
}

double beta(const WeightModel& model, double lambda) {
  if (!(lambda * model.moment(2) > 1.0)) {
    throw std::domain_error("beta is only defined above criticality: lambda=" +
                            shortest_real(lambda) + " <= lambda_crit=" +
                            shortest_real(lambda_crit(model)));
  }
  const double t = lambda * theta(model, lambda);
  return 1.0 - lambda * mixed_moment(model, 2, t);
}

double psi_cov(const WeightModel& model, int p, int q, double s, double t) {
  if (p < 0 || p > 1 || q < 0 || q > 1) throw std::invalid_argument("psi index must be 0 or 1");
  if (!(s >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("psi times must be >= 0");
  // e^{-W max} - e^{-W (s+t)} = e^{-W max} (1 - e^{-W min})
  const double hi = std::max(s, t);
  const double lo = std::min(s, t);
  const int k = p + q;
  return expectation(model, [&](double w) {
    const double wk = k == 0 ? 1.0 : (k == 1 ? w : w * w);
    return -wk * std::exp(-w * hi) * std::expm1(-w * lo);
  });
}

void require_supercritical(const WeightModel& model, std::span<const double> lambdas,
                           double margin) {
  const double lc = lambda_crit(model);
  for (double l : lambdas) {
    if (!(l >= lc * (1.0 + margin))) {
      throw std::invalid_argument("lambda=" + shortest_real(l) +
                                  " is not supercritical: lambda_crit=" + shortest_real(lc) +
                                  ", required lambda >= lambda_crit*(1+" + shortest_real(margin) + ")");
    }
  }
}

SupercriticalCurves tabulate_curves(const WeightModel& model, std::span<const double> lambdas) {
  SupercriticalCurves curves{model, lambda_crit(model), {}};
  curves.points.reserve(lambdas.size());
  for (double l : lambdas) {
    const double th = theta(model, l);
    if (th == 0.0) beta(model, l);  // throws the subcritical diagnostic
    const double t = l * th;
    const double r = phi(model, 0, t);
    const double b = 1.0 - l * mixed_moment(model, 2, t);
    curves.points.push_back({l, th, r, b});
  }
  return curves;
}

namespace {

struct Coefficients {
  double time;
  double size_coeff;
  double volume_coeff;
};

Coefficients coefficients(const WeightModel& model, const CurvePoint& pt) {
  const double t = pt.lambda * pt.theta;
  return {t, pt.lambda * phi_prime(model, 0, t) / pt.beta, 1.0 / pt.beta};
}

}  // namespace

Eigen::Matrix2d x_cov_block(const SupercriticalCurves& curves, std::size_t i, std::size_t j) {
  const auto ci = coefficients(curves.model, curves.points.at(i));
  const auto cj = coefficients(curves.model, curves.points.at(j));
  Eigen::Matrix2d kernel;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) kernel(p, q) = psi_cov(curves.model, p, q, ci.time, cj.time);
  }
  Eigen::Matrix2d left;
  left << 1.0, ci.size_coeff, 0.0, ci.volume_coeff;
  Eigen::Matrix2d right;
  right << 1.0, cj.size_coeff, 0.0, cj.volume_coeff;
  return left * kernel * right.transpose();
}

LimitCovariance x_cov(const SupercriticalCurves& curves) {
  for (const auto& pt : curves.points) {
    if (!(pt.lambda > curves.lambda_crit) || !(pt.beta > 0.0)) {
      throw std::invalid_argument("x_cov requires every grid point to be supercritical");
    }
  }
  const std::size_t m = curves.points.size();
  LimitCovariance out;
  out.matrix.resize(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * m));
  for (const auto& pt : curves.points) {
    const auto c = coefficients(curves.model, pt);
    out.lambdas.push_back(pt.lambda);
    out.times.push_back(c.time);
    out.size_coeff.push_back(c.size_coeff);
    out.volume_coeff.push_back(c.volume_coeff);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      Eigen::Matrix2d b = x_cov_block(curves, i, j);
      if (i == j) b = 0.5 * (b + b.transpose()).eval();
      const auto r = static_cast<Eigen::Index>(2 * i);
      const auto c = static_cast<Eigen::Index>(2 * j);
      out.matrix.block<2, 2>(r, c) = b;
      out.matrix.block<2, 2>(c, r) = b.transpose();
    }
  }
  out.jitter = factorize_psd(out.matrix).jitter;
  return out;
}

ErClosedForms er_closed_forms(double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("Erdos-Renyi closed forms need lambda > 1");
  // g(x) = 1 - e^{-lambda x} - x is concave, maximal at log(lambda)/lambda, g(1) < 0.
  auto g = [lambda](double x) { return -std::expm1(-lambda * x) - x; };
  double lo = std::log(lambda) / lambda;
  double hi = 1.0;
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  const double q = 1.0 - r;
  const double denom = 1.0 - lambda * q;
  return {r, r * q / (denom * denom), 1.0 / q - lambda, r / q};
}

double er_brownian_covariance(double lambda1, double lambda2) {
  const auto a = er_closed_forms(lambda1);
  const auto b = er_closed_forms(lambda2);
  return std::min(a.v, b.v) / (a.u * b.u);
}

PsdFactor factorize_psd(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw std::invalid_argument("covariance must be square");
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  const auto dim = sym.rows();
  const double max_diag = dim > 0 ? sym.diagonal().maxCoeff() : 0.0;
  if (dim == 0 || max_diag <= 0.0) {
    if (dim > 0 && sym.cwiseAbs().maxCoeff() > 0.0) {
      throw std::runtime_error("covariance has zero diagonal but non-zero entries");
    }
    return {Eigen::MatrixXd::Zero(dim, dim), 0.0};
  }

  double used = -1.0;
  for (double eps : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd trial = sym;
    trial.diagonal().array() += eps * max_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      used = eps;
      break;
    }
  }
  if (used < 0.0) {
    throw std::runtime_error("covariance is not positive semidefinite (Cholesky failed with jitter 1e-6)");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd values = eig.eigenvalues();
  const double floor = 1e-12 * max_diag;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    values[k] = values[k] > floor ? std::sqrt(values[k]) : 0.0;
  }
  return {eig.eigenvectors() * values.asDiagonal(), used};
}

}  // namespace giantflux
