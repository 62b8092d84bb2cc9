#pragma once

#include "tailrisk/linalg.hpp"
#include "tailrisk/tail_risk.hpp"

#include <vector>

namespace tailrisk {

struct PortfolioWeights {
  Vector weights;
  double gross = 0.0;  // sum of |w_i|
};

/// Wraps arbitrary weights; checks finiteness and that they sum to one.
PortfolioWeights make_weights(Vector w);

/// Global minimum-variance weights G^{-1}1 / (1'G^{-1}1). Short positions allowed.
PortfolioWeights min_variance_weights(const RiskMatrix& gamma);
PortfolioWeights min_variance_weights(const Matrix& gamma);

double quadratic_loss(const RiskMatrix& gamma, const PortfolioWeights& w);
double quadratic_loss(const Matrix& gamma, const Vector& w);

struct LossDecomposition {
  double network_part = 0.0;        // w'(G - diag G)w
  double idiosyncratic_part = 0.0;  // sum_i w_i^2 G_ii
  double total() const noexcept { return network_part + idiosyncratic_part; }
};

LossDecomposition loss_decomposition(const RiskMatrix& gamma, const PortfolioWeights& w);
LossDecomposition loss_decomposition(const Matrix& gamma, const Vector& w);

/// lambda_k written as sum_i u_ik^2 G_ii + sum_i sum_{j != i} u_ik u_jk G_ij.
double rayleigh_expansion(const Matrix& gamma, const Vector& u);

struct Assumption1Row {
  Index k = 0;
  double eigenvalue = 0.0;
  double lhs = 0.0;  // sum_i u_ik^2
  double rhs = 0.0;  // -sum_i sum_{j != i} u_ik u_jk G_ij / G_kk
  bool holds = false;
};

struct Assumption1Report {
  std::vector<Assumption1Row> rows;  // one per eigenpair, ascending eigenvalue
  double min_eigenvalue = 0.0;
  bool positive_definite = false;
};

/// Evaluates the per-eigenvector positivity condition. The verdict is
/// min_eigenvalue > 0.
Assumption1Report assumption1_check(const RiskMatrix& gamma);
Assumption1Report assumption1_check(const Matrix& gamma);

}  // namespace tailrisk
