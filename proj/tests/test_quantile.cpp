#include "oracles.hpp"

#include "tailrisk/error.hpp"
#include "tailrisk/quantile.hpp"

#include <doctest.h>

using namespace tailrisk;

namespace {

Design intercept_only(Index n) { return Design(Matrix::Ones(n, 1)); }

Design random_design(CounterRng& rng, Index n, Index k) {
  return Design::with_intercept(oracle::gaussian_matrix(rng, n, k - 1));
}

}  // namespace

TEST_CASE("check_loss matches its definition") {
  CHECK(check_loss(0.0, QuantileLevel(0.5)) == 0.0);
  CHECK(check_loss(1.0, QuantileLevel(0.25)) == doctest::Approx(0.25));
  CHECK(check_loss(-1.0, QuantileLevel(0.25)) == doctest::Approx(0.75));
  CHECK(check_loss(2.5, QuantileLevel(0.95)) == doctest::Approx(2.375));
  CHECK_THROWS_AS(check_loss(std::nan(""), QuantileLevel(0.5)), Error);
  CHECK_THROWS_AS(check_loss(INFINITY, QuantileLevel(0.5)), Error);
}

TEST_CASE("quantile level outside (0,1) is rejected") {
  CHECK_THROWS_AS(QuantileLevel(0.0), Error);
  CHECK_THROWS_AS(QuantileLevel(1.0), Error);
  CHECK_THROWS_AS(QuantileLevel(-0.2), Error);
}

TEST_CASE("design contract") {
  Matrix bad = Matrix::Ones(3, 2);
  bad(1, 0) = 2.0;
  CHECK_THROWS_AS(Design{bad}, Error);
  CHECK_THROWS_AS(Design{Matrix::Ones(1, 2)}, Error);
  Matrix nonfinite = Matrix::Ones(3, 2);
  nonfinite(2, 1) = NAN;
  CHECK_THROWS_AS(Design{nonfinite}, Error);
}

TEST_CASE("intercept-only median") {
  Vector y(5);
  y << 1, 2, 3, 4, 5;
  const auto fit = fit_quantile(intercept_only(5), y, QuantileLevel(0.5));
  CHECK(fit.converged);
  CHECK(fit.coefficients(0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("flat minimum: objective equals the order-statistic scan") {
  Vector y(4);
  y << 1, 2, 3, 4;
  const auto fit = fit_quantile(intercept_only(4), y, QuantileLevel(0.25));
  CHECK(std::abs(fit.objective - oracle::empirical_quantile_objective(y, 0.25)) <= 1e-12);
}

TEST_CASE("random k=3 problem matches LP vertex enumeration") {
  CounterRng rng(7);
  const Design x = random_design(rng, 30, 3);
  Vector y = oracle::gaussian_matrix(rng, 30, 1).col(0);
  for (double tau : {0.05, 0.5, 0.9}) {
    const auto fit = fit_quantile(x, y, QuantileLevel(tau));
    CHECK(fit.converged);
    CHECK(std::abs(fit.objective - oracle::quantile_lp_optimum(x.values(), y, tau)) <= 1e-6);
  }
}

TEST_CASE("fit invariants: residuals, objective, subgradient condition, monotone trace") {
  CounterRng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const Index n = 10 + static_cast<Index>(rng.uniform() * 60);
    const Index k = 1 + static_cast<Index>(rng.uniform() * 4);
    const double tau = 0.05 + 0.9 * rng.uniform();
    const Design x = random_design(rng, n, k);
    Vector y = oracle::gaussian_matrix(rng, n, 1).col(0) * 2.0;
    const auto fit = fit_quantile(x, y, QuantileLevel(tau));
    REQUIRE(fit.converged);
    CHECK((fit.residuals - (y - x.values() * fit.coefficients)).cwiseAbs().maxCoeff() == 0.0);
    double s = 0.0;
    for (Index t = 0; t < n; ++t) s += check_loss(fit.residuals(t), QuantileLevel(tau));
    CHECK(fit.objective == s);

    const double xmax = x.values().cwiseAbs().maxCoeff();
    for (Index j = 0; j < k; ++j) {
      double g = 0.0;
      double slack = 0.0;
      for (Index t = 0; t < n; ++t) {
        const double r = fit.residuals(t);
        if (std::abs(r) <= 1e-10) {
          slack += std::abs(x.values()(t, j)) * std::max(tau, 1.0 - tau);
        } else {
          g += x.values()(t, j) * (tau - (r < 0.0 ? 1.0 : 0.0));
        }
      }
      CHECK(std::abs(g) <= slack + static_cast<double>(k) * xmax * 1e-6);
    }
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i) {
      CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1] * (1.0 + 1e-10) + 1e-12);
    }
  }
}

TEST_CASE("intercept-only fit is an empirical quantile") {
  CounterRng rng(3);
  for (Index n = 1; n <= 50; n += 7) {
    Vector y = oracle::gaussian_matrix(rng, n, 1).col(0);
    for (double tau : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      const auto fit = fit_quantile(intercept_only(n), y, QuantileLevel(tau));
      CHECK(std::abs(fit.objective - oracle::empirical_quantile_objective(y, tau)) <= 1e-10);
    }
  }
}

TEST_CASE("scale and shift equivariance") {
  CounterRng rng(5);
  const Design x = random_design(rng, 40, 3);
  Vector y = oracle::gaussian_matrix(rng, 40, 1).col(0);
  const QuantileLevel tau(0.3);
  const auto base = fit_quantile(x, y, tau);
  const auto scaled = fit_quantile(x, 3.5 * y, tau);
  CHECK((scaled.coefficients - 3.5 * base.coefficients).cwiseAbs().maxCoeff() <= 1e-8);
  Vector b(3);
  b << 0.7, -1.2, 0.4;
  const auto shifted = fit_quantile(x, y + x.values() * b, tau);
  CHECK((shifted.coefficients - (base.coefficients + b)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("rank-deficient design fails loudly") {
  Matrix m(6, 3);
  m.col(0).setOnes();
  m.col(1) << 1, 2, 3, 4, 5, 6;
  m.col(2) = 2.0 * m.col(1);
  Vector y = Vector::LinSpaced(6, 0.0, 1.0);
  try {
    (void)fit_quantile(Design(m), y, QuantileLevel(0.5));
    FAIL("expected rank deficiency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}

TEST_CASE("predict") {
  QuantileFit fit;
  fit.coefficients = Vector::Constant(1, 3.0);
  CHECK(predict(fit, Vector::Ones(1)) == 3.0);
  fit.coefficients = Vector(2);
  fit.coefficients << 1, 2;
  Vector x(2);
  x << 1, 0.5;
  CHECK(predict(fit, x) == 2.0);
  fit.coefficients.setZero();
  CHECK(predict(fit, x) == 0.0);
  CHECK_THROWS_AS(predict(fit, Vector::Ones(3)), Error);
}
