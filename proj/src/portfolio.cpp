#include "tailrisk/portfolio.hpp"

#include "tailrisk/error.hpp"

#include <cmath>
#include <sstream>

namespace tailrisk {

namespace {

void require_square_symmetric(const Matrix& g, const char* who) {
  require(g.rows() == g.cols() && g.rows() > 0, std::string(who) + ": matrix must be square");
  require(g.allFinite(), std::string(who) + ": matrix has non-finite entries");
  require(is_exactly_symmetric(g), std::string(who) + ": matrix must be symmetric");
}

}  // namespace

PortfolioWeights make_weights(Vector w) {
  require(w.size() > 0 && w.allFinite(), "portfolio weights must be finite");
  require(std::abs(w.sum() - 1.0) <= 1e-12 * std::max(1.0, w.cwiseAbs().sum()),
          "portfolio weights must sum to one");
  PortfolioWeights out;
  out.gross = w.cwiseAbs().sum();
  out.weights = std::move(w);
  return out;
}

PortfolioWeights min_variance_weights(const Matrix& gamma) {
  require_square_symmetric(gamma, "min_variance_weights");
  const auto spec = symmetric_eigen(gamma);
  const double min_eig = spec.values(0);
  const double scale = spec.values.cwiseAbs().maxCoeff();
  if (!(min_eig > kPdTolerance * scale)) {
    std::ostringstream msg;
    msg << "min_variance_weights: matrix is not positive definite (min eigenvalue "
        << min_eig << ")";
    fail(ErrorKind::Singular, msg.str());
  }
  const Index n = gamma.rows();
  Vector x = spd_solve(gamma, Vector::Ones(n));
  x /= x.sum();
  PortfolioWeights out;
  out.gross = x.cwiseAbs().sum();
  out.weights = std::move(x);
  return out;
}

PortfolioWeights min_variance_weights(const RiskMatrix& gamma) {
  return min_variance_weights(gamma.gamma);
}

double quadratic_loss(const Matrix& gamma, const Vector& w) {
  require(gamma.rows() == gamma.cols() && gamma.rows() == w.size(),
          "quadratic_loss: dimension mismatch");
  return w.dot(gamma * w);
}

double quadratic_loss(const RiskMatrix& gamma, const PortfolioWeights& w) {
  return quadratic_loss(gamma.gamma, w.weights);
}

LossDecomposition loss_decomposition(const Matrix& gamma, const Vector& w) {
  require(gamma.rows() == gamma.cols() && gamma.rows() == w.size(),
          "loss_decomposition: dimension mismatch");
  LossDecomposition d;
  Matrix off = gamma;
  off.diagonal().setZero();
  d.network_part = w.dot(off * w);
  d.idiosyncratic_part = w.cwiseAbs2().dot(gamma.diagonal());
  return d;
}

LossDecomposition loss_decomposition(const RiskMatrix& gamma, const PortfolioWeights& w) {
  return loss_decomposition(gamma.gamma, w.weights);
}

double rayleigh_expansion(const Matrix& gamma, const Vector& u) {
  require(gamma.rows() == gamma.cols() && gamma.rows() == u.size(),
          "rayleigh_expansion: dimension mismatch");
  const Index n = gamma.rows();
  double diag = 0.0;
  double off = 0.0;
  for (Index i = 0; i < n; ++i) {
    diag += u(i) * u(i) * gamma(i, i);
    for (Index j = 0; j < n; ++j)
      if (j != i) off += u(i) * u(j) * gamma(i, j);
  }
  return diag + off;
}

Assumption1Report assumption1_check(const Matrix& gamma) {
  require_square_symmetric(gamma, "assumption1_check");
  const Index n = gamma.rows();
  for (Index k = 0; k < n; ++k) {
    if (!(gamma(k, k) > 0.0)) {
      fail(ErrorKind::Domain, "assumption1_check: diagonal entry " + std::to_string(k) +
                                  " is not positive");
    }
  }
  const auto spec = symmetric_eigen(gamma);
  Assumption1Report rep;
  rep.min_eigenvalue = spec.values(0);
  rep.positive_definite = rep.min_eigenvalue > 0.0;
  for (Index k = 0; k < n; ++k) {
    const Vector u = spec.vectors.col(k);
    Assumption1Row row;
    row.k = k;
    row.eigenvalue = spec.values(k);
    row.lhs = u.squaredNorm();
    double cross = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (j != i) cross += u(i) * u(j) * gamma(i, j);
    row.rhs = -cross / gamma(k, k);
    row.holds = row.lhs > row.rhs;
    rep.rows.push_back(row);
  }
  return rep;
}

Assumption1Report assumption1_check(const RiskMatrix& gamma) { return assumption1_check(gamma.gamma); }

}  // namespace tailrisk
