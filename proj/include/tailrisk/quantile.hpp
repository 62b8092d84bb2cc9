#pragma once

#include "tailrisk/linalg.hpp"

#include <vector>

namespace tailrisk {

/// Quantile level strictly inside (0,1).
class QuantileLevel {
 public:
  explicit QuantileLevel(double tau);
  double value() const noexcept { return tau_; }

 private:
  double tau_;
};

/// Regression design with the intercept stored as column 0.
class Design {
 public:
  /// Takes the full matrix, intercept column included. Validates the
  /// contract (n >= k, finite entries, ones in column 0).
  explicit Design(Matrix values);

  /// Prepends a column of ones to the given regressors.
  static Design with_intercept(const Matrix& regressors);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

struct QuantileFit {
  Vector coefficients;
  double tau = 0.5;
  double objective = 0.0;
  Vector residuals;
  bool converged = false;
  int iterations = 0;
  /// True check-loss objective after each accepted solver step.
  std::vector<double> objective_trace;
};

struct QuantileOptions {
  int max_iter = 200;
  double smoothing_start = 1e-2;
  double smoothing_end = 1e-8;
  /// Cap on vertex-exchange steps in the polishing phase, as a multiple of n.
  int max_pivots_per_row = 50;
};

double check_loss(double u, QuantileLevel tau);

/// Sum of check losses of y - X*theta.
double check_objective(const Matrix& x, const Vector& y, const Vector& theta,
                       QuantileLevel tau);

QuantileFit fit_quantile(const Design& x, const Vector& y, QuantileLevel tau,
                         const QuantileOptions& opts = {});

double predict(const QuantileFit& fit, const Vector& x);

}  // namespace tailrisk
