#pragma once

#include "tailrisk/linalg.hpp"

#include <optional>
#include <vector>

namespace tailrisk {

struct NodewiseOptions {
  double tolerance = 1e-10;  // max coefficient change per sweep
  int max_sweeps = 10000;
};

/// Lasso fit of node j on the others, written with a -1 self-coefficient.
struct NodewiseFit {
  Index node = 0;
  Vector alpha;      // alpha(node) == -1
  double lambda = 0.0;
  Vector residuals;  // -alpha' y_t
  int sweeps = 0;
  bool converged = false;
};

/// Minimizes (1/n) sum_t (g'y_t)^2 + 2 lambda |g|_1 over g with g_j = -1 by
/// cyclic coordinate descent. Y must be column-centered.
NodewiseFit fit_nodewise(const Matrix& y, Index j, double lambda, const NodewiseOptions& opts = {});

/// Bias-corrected residual covariance built from all p nodewise fits.
Matrix debiased_v(const std::vector<NodewiseFit>& fits, const Matrix& y);

/// omega_ij = v_ij / (v_ii v_jj).
Matrix precision_assemble(const Matrix& v_hat);

/// c * sqrt(log p / n).
double default_lambda(Index n, Index p, double c = 0.5);

struct PrecisionEstimate {
  Matrix v_hat;
  Matrix omega_hat;
  Vector lambdas;
  std::vector<NodewiseFit> fits;
};

/// Centers Y (n x p), runs the p nodewise fits on `threads` workers
/// (0 = hardware concurrency) and assembles the precision estimate. Missing
/// lambdas default to default_lambda(n, p).
PrecisionEstimate estimate_precision(const Matrix& y, std::optional<Vector> lambdas = std::nullopt,
                                     unsigned threads = 0, const NodewiseOptions& opts = {});

}  // namespace tailrisk
