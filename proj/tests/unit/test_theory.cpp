#include <cmath>

#include "doctest.h"
#include "giantflux/theory.hpp"

using namespace giantflux;

namespace {

WeightModel er() { return WeightModel::constant(1.0); }
WeightModel two_point() { return WeightModel::discrete({{1.0, 0.5}, {2.0, 0.5}}); }
WeightModel skewed() { return WeightModel::discrete({{0.5, 0.8}, {3.0, 0.2}}); }

// Golden values from a 40-digit mpmath root solve, independent of this code.
constexpr double kRhoEr15 = 0.58281164386581138604;
constexpr double kRhoEr2 = 0.79681213002002004616;
constexpr double kRhoEr3 = 0.94047979070735963113;
constexpr double kSigma2Er2 = 0.45944172300703756483;
constexpr double kSigma2Er15 = 1.7362501316479815753;
constexpr double kThetaTwoPoint1 = 1.2851963780417547356;
constexpr double kRhoTwoPoint1 = 0.82344912380433156866;

}  // namespace

TEST_CASE("lambda_crit") {
  CHECK(lambda_crit(er()) == 1.0);
  CHECK(lambda_crit(two_point()) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(lambda_crit(WeightModel::constant(2.0)) == 0.25);
}

TEST_CASE("theta: subcritical and critical are zero") {
  for (const auto& m : {er(), two_point(), skewed()}) {
    CHECK(theta(m, lambda_crit(m) / 2) == 0.0);
    CHECK(theta(m, lambda_crit(m)) == 0.0);
    CHECK(rho(m, lambda_crit(m) / 2) == 0.0);
  }
  CHECK(theta(er(), 1.0) == 0.0);
  CHECK_THROWS_AS(theta(er(), 0.0), std::invalid_argument);
}

TEST_CASE("theta and rho golden values") {
  CHECK(std::abs(theta(er(), 2.0) - kRhoEr2) <= 1e-12);
  CHECK(std::abs(rho(er(), 2.0) - kRhoEr2) <= 1e-12);
  CHECK(std::abs(theta(two_point(), 1.0) - kThetaTwoPoint1) <= 1e-10);
  const double r = rho(two_point(), 1.0);
  CHECK(r > 0.0);
  CHECK(r < 1.0);
  CHECK(std::abs(r - kRhoTwoPoint1) <= 1e-10);
}

TEST_CASE("beta") {
  const double b = beta(er(), 2.0);
  CHECK(std::abs(b - (1.0 - 2.0 * (1.0 - kRhoEr2))) <= 1e-12);
  for (double l : {1.5, 2.0, 3.0}) {
    CHECK(std::abs(beta(er(), l) + l * (1.0 - rho(er(), l)) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(beta(er(), 1.0), std::domain_error);
  CHECK_THROWS_AS(beta(er(), 0.5), std::domain_error);
  CHECK(beta(er(), 1.0 + 1e-6) < 1e-5);
  CHECK(beta(er(), 1.0 + 1e-6) > 0.0);
}

TEST_CASE("curve invariants on a grid") {
  for (const auto& m : {er(), two_point(), skewed()}) {
    const double lc = lambda_crit(m);
    std::vector<double> grid;
    for (int k = 0; k < 40; ++k) grid.push_back(lc * (1.001 + 0.1 * k));
    const auto curves = tabulate_curves(m, grid);
    double prev_theta = 0.0;
    double prev_rho = 0.0;
    for (const auto& p : curves.points) {
      CHECK(p.theta > 0.0);
      CHECK(p.theta < m.moment(1));
      CHECK(p.rho > 0.0);
      CHECK(p.rho < 1.0);
      CHECK(p.beta > 0.0);
      CHECK(p.beta < 1.0);
      CHECK(p.theta >= prev_theta);
      CHECK(p.rho >= prev_rho);
      CHECK(std::abs(phi(m, 1, p.lambda * p.theta) - p.theta) <= 1e-10);
      prev_theta = p.theta;
      prev_rho = p.rho;
    }
  }
  CHECK_THROWS_AS(tabulate_curves(er(), std::vector<double>{0.9}), std::domain_error);
}

TEST_CASE("require_supercritical names the offending lambda") {
  try {
    require_supercritical(er(), std::vector<double>{1.5, 1.0005});
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1.0005") != std::string::npos);
    CHECK(msg.find("lambda_crit=1") != std::string::npos);
  }
  CHECK_NOTHROW(require_supercritical(er(), std::vector<double>{1.001, 2.0}));
}

TEST_CASE("psi_cov examples and symmetry") {
  for (int p : {0, 1}) {
    for (int q : {0, 1}) {
      CHECK(psi_cov(two_point(), p, q, 0.0, 1.3) == 0.0);
      CHECK(psi_cov(two_point(), p, q, 1.3, 0.0) == 0.0);
    }
  }
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(psi_cov(er(), 0, 0, t, t) == doctest::Approx(std::exp(-t) * (1 - std::exp(-t))).epsilon(1e-14));
  }
  const double expected =
      0.5 * (std::exp(-2.0) - std::exp(-3.0)) + 0.5 * 4.0 * (std::exp(-4.0) - std::exp(-6.0));
  CHECK(psi_cov(two_point(), 1, 1, 1.0, 2.0) == doctest::Approx(expected).epsilon(1e-14));

  const auto emp = WeightModel::empirical({0.4, 1.3, 2.9});
  for (const auto& m : {two_point(), skewed(), emp}) {
    for (double s : {0.3, 1.1}) {
      for (double t : {0.7, 2.4}) {
        CHECK(psi_cov(m, 0, 1, s, t) == psi_cov(m, 1, 0, t, s));
        CHECK(psi_cov(m, 1, 1, s, t) == psi_cov(m, 1, 1, t, s));
      }
      CHECK(psi_cov(m, 0, 0, s, s) >= 0.0);
      CHECK(psi_cov(m, 1, 1, s, s) >= 0.0);
    }
  }
}

TEST_CASE("er closed forms") {
  const auto f = er_closed_forms(2.0);
  CHECK(std::abs(f.rho_er - kRhoEr2) <= 1e-12);
  CHECK(std::abs(f.sigma2 - kSigma2Er2) <= 1e-10);
  CHECK(std::abs(er_closed_forms(1.5).sigma2 - kSigma2Er15) <= 1e-10);
  CHECK(std::abs(er_closed_forms(1.5).rho_er - kRhoEr15) <= 1e-12);
  CHECK(std::abs(er_closed_forms(3.0).rho_er - kRhoEr3) <= 1e-12);
  for (double l : {1.1, 1.5, 2.0, 3.0, 5.0}) {
    const auto g = er_closed_forms(l);
    CHECK(std::abs(g.v / (g.u * g.u) - g.sigma2) <= 1e-12);
  }
  CHECK(er_closed_forms(50.0).rho_er > 0.999);
  CHECK(er_closed_forms(50.0).sigma2 < 1e-3);
  CHECK_THROWS_AS(er_closed_forms(1.0), std::invalid_argument);
}

TEST_CASE("x_cov matches the Erdos-Renyi variance") {
  const std::vector<double> grid{1.5, 2.0, 3.0};
  const auto curves = tabulate_curves(er(), grid);
  const auto cov = x_cov(curves);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto b = cov.block(i, i);
    CHECK(std::abs(b(0, 0) - er_closed_forms(grid[i]).sigma2) <= 1e-10);
    const auto& p = curves.points[i];
    const double tau = p.lambda * p.theta;
    CHECK(b(1, 1) == doctest::Approx(psi_cov(er(), 1, 1, tau, tau) / (p.beta * p.beta)).epsilon(1e-14));
    // W = 1: size and volume coordinates coincide.
    CHECK(b(0, 1) == doctest::Approx(b(0, 0)).epsilon(1e-12));
  }
  CHECK((cov.matrix - cov.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("x_cov cross-lambda blocks agree with the Brownian representation") {
  const std::vector<double> grid{1.5, 2.0};
  const auto cov = x_cov(tabulate_curves(er(), grid));
  CHECK(cov.jitter <= 1e-10);
  CHECK(std::abs(cov.block(0, 1)(0, 0) - er_brownian_covariance(1.5, 2.0)) <= 1e-10);
  CHECK(std::abs(cov.block(1, 0)(0, 0) - er_brownian_covariance(2.0, 1.5)) <= 1e-10);
}

TEST_CASE("x_cov for a non-trivial law is PSD without jitter") {
  std::vector<double> grid;
  for (int k = 0; k < 6; ++k) grid.push_back(0.6 + 0.4 * k);
  const auto cov = x_cov(tabulate_curves(two_point(), grid));
  CHECK(cov.jitter == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov.matrix);
  CHECK(eig.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("factorize_psd") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(factorize_psd(bad), std::runtime_error);

  Eigen::MatrixXd rank_one(2, 2);
  rank_one << 0.25, 0.25, 0.25, 0.25;
  const auto f = factorize_psd(rank_one);
  CHECK((f.factor * f.factor.transpose() - rank_one).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((f.factor.row(0) - f.factor.row(1)).cwiseAbs().maxCoeff() < 1e-15);

  const auto zero = factorize_psd(Eigen::MatrixXd::Zero(2, 2));
  CHECK(zero.factor.isZero());
}

TEST_CASE("empirical quantile curves converge to the discrete curves") {
  const std::size_t n = 10000;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = j < n / 2 ? 1.0 : 2.0;
  const auto emp = WeightModel::empirical(w);
  const std::vector<double> grid{0.6, 1.0, 1.5, 3.0};
  const auto a = tabulate_curves(two_point(), grid);
  const auto b = tabulate_curves(emp, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(a.points[i].theta - b.points[i].theta) <= 1e-6);
    CHECK(std::abs(a.points[i].rho - b.points[i].rho) <= 1e-6);
    CHECK(std::abs(a.points[i].beta - b.points[i].beta) <= 1e-6);
  }
}
