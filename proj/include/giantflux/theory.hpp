#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "giantflux/weights.hpp"

namespace giantflux {

/// Grid points closer than this relative margin to lambda_crit are rejected.
inline constexpr double kDefaultSupercriticalMargin = 1e-3;

struct CurvePoint {
  double lambda;
  double theta;  // limiting volume fraction of the giant
  double rho;    // limiting vertex fraction of the giant
  double beta;   // 1 - lambda E[W^2 e^{-W lambda theta}]
};

struct SupercriticalCurves {
  WeightModel model;
  double lambda_crit;
  std::vector<CurvePoint> points;
};

/// Covariance of X(lambda) on a grid, ordered (X_0(l_1), X_1(l_1), X_0(l_2), ...).
struct LimitCovariance {
  std::vector<double> lambdas;
  std::vector<double> times;  // lambda * theta(lambda)
  // X_0 = Psi_0(tau) + size_coeff * Psi_1(tau); X_1 = volume_coeff * Psi_1(tau).
  std::vector<double> size_coeff;
  std::vector<double> volume_coeff;
  Eigen::MatrixXd matrix;
  double jitter = 0.0;  // relative diagonal jitter the PSD check needed

  Eigen::Matrix2d block(std::size_t i, std::size_t j) const {
    return matrix.block<2, 2>(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(j));
  }
};

double lambda_crit(const WeightModel& model);

/// Positive root of phi_1(lambda t) = t; 0 for lambda <= lambda_crit.
///
/// Two bisections: first on the (decreasing) derivative of the concave
/// f(t) = phi_1(lambda t) - t to locate its maximiser t*, then on f over
/// [t*, E[W]] where f changes sign.
double theta(const WeightModel& model, double lambda, double tolerance = 1e-12);
double rho(const WeightModel& model, double lambda);
/// Throws std::domain_error for lambda <= lambda_crit.
double beta(const WeightModel& model, double lambda);

/// E[Psi_p(s) Psi_q(t)] = E[W^{p+q} (e^{-W max(s,t)} - e^{-W (s+t)})].
double psi_cov(const WeightModel& model, int p, int q, double s, double t);

/// Throws std::invalid_argument naming the first lambda below lambda_crit * (1 + margin).
void require_supercritical(const WeightModel& model, std::span<const double> lambdas,
                           double margin = kDefaultSupercriticalMargin);

/// Curves on a strictly supercritical grid (beta needs lambda > lambda_crit).
SupercriticalCurves tabulate_curves(const WeightModel& model, std::span<const double> lambdas);

/// Cov(X(l_i), X(l_j)) for two grid points; no factorization involved.
Eigen::Matrix2d x_cov_block(const SupercriticalCurves& curves, std::size_t i, std::size_t j);

/// Full covariance of X on the curves' grid, checked PSD by jittered Cholesky.
LimitCovariance x_cov(const SupercriticalCurves& curves);

struct ErClosedForms {
  double rho_er;
  double sigma2;  // rho(1-rho) / (1 - lambda(1-rho))^2
  double u;       // 1/(1-rho) - lambda
  double v;       // rho/(1-rho)
};

/// Erdos-Renyi anchors for lambda > 1, with rho_er from its own bisection.
ErClosedForms er_closed_forms(double lambda);

/// Cov(X_0(l1), X_0(l2)) of the time-changed Brownian limit v(min)/(u(l1) u(l2)).
double er_brownian_covariance(double lambda1, double lambda2);

struct PsdFactor {
  Eigen::MatrixXd factor;  // cov = factor * factor^T (up to clipping)
  double jitter;
};

/// PSD gate plus sampling factor for a covariance matrix.
///
/// The gate tries a Cholesky of A + eps * max(diag A) * I for eps = 0, 1e-12,
/// ..., 1e-6 and throws std::runtime_error if all fail. The returned factor is
/// V sqrt(max(D, 0)) from a symmetric eigendecomposition with eigenvalues
/// below 1e-12 * max(diag A) clipped, so rank-deficient kernels (Psi_0 = Psi_1
/// when W is constant) keep their exact linear relations.
PsdFactor factorize_psd(const Eigen::MatrixXd& cov);

}  // namespace giantflux
