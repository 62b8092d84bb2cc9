#include "tailrisk/precision.hpp"

#include "parallel.hpp"
#include "tailrisk/error.hpp"

#include <cmath>
#include <string>

namespace tailrisk {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

NodewiseFit fit_nodewise(const Matrix& y, Index j, double lambda, const NodewiseOptions& opts) {
  const Index n = y.rows();
  const Index p = y.cols();
  require(n > 2, "fit_nodewise: need more than two observations");
  require(j >= 0 && j < p, "fit_nodewise: node index out of range");
  require(lambda >= 0.0 && std::isfinite(lambda), "fit_nodewise: lambda must be finite and >= 0");
  require(y.allFinite(), "fit_nodewise: data contain non-finite values");

  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector sq = y.colwise().squaredNorm().transpose() * inv_n;

  NodewiseFit fit;
  fit.node = j;
  fit.lambda = lambda;
  fit.alpha = Vector::Zero(p);
  fit.alpha(j) = -1.0;
  Vector s = -y.col(j);  // s_t = alpha' y_t

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index k = 0; k < p; ++k) {
      if (k == j) continue;
      const double old = fit.alpha(k);
      double next = 0.0;
      if (sq(k) > 0.0) {
        const double z = -(inv_n * y.col(k).dot(s) - old * sq(k));
        next = soft_threshold(z, lambda) / sq(k);
      }
      if (next != old) {
        s.noalias() += (next - old) * y.col(k);
        fit.alpha(k) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    fit.sweeps = sweep;
    if (max_change < opts.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.residuals = -(y * fit.alpha);
  return fit;
}

Matrix debiased_v(const std::vector<NodewiseFit>& fits, const Matrix& y) {
  const Index p = y.cols();
  const Index n = y.rows();
  require(static_cast<Index>(fits.size()) == p, "debiased_v: need one fit per column");
  for (Index j = 0; j < p; ++j) {
    const auto& f = fits[static_cast<std::size_t>(j)];
    require(f.node == j && f.alpha.size() == p && f.residuals.size() == n,
            "debiased_v: fits do not match the data");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Vector ss(p);
  for (Index j = 0; j < p; ++j) ss(j) = fits[static_cast<std::size_t>(j)].residuals.squaredNorm() * inv_n;

  Matrix v(p, p);
  for (Index a = 0; a < p; ++a) {
    v(a, a) = ss(a);
    const auto& fa = fits[static_cast<std::size_t>(a)];
    for (Index b = a + 1; b < p; ++b) {
      const auto& fb = fits[static_cast<std::size_t>(b)];
      const double cross = fa.residuals.dot(fb.residuals) * inv_n;
      const double val = -(cross + fa.alpha(b) * ss(b) + fb.alpha(a) * ss(a));
      v(a, b) = val;
      v(b, a) = val;
    }
  }
  return v;
}

Matrix precision_assemble(const Matrix& v_hat) {
  const Index p = v_hat.rows();
  require(v_hat.cols() == p, "precision_assemble: matrix must be square");
  for (Index j = 0; j < p; ++j) {
    if (!(v_hat(j, j) > 0.0)) {
      fail(ErrorKind::Domain, "precision_assemble: diagonal entry " + std::to_string(j) +
                                  " is not positive");
    }
  }
  Matrix omega(p, p);
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b) omega(a, b) = v_hat(a, b) / (v_hat(a, a) * v_hat(b, b));
  return omega;
}

double default_lambda(Index n, Index p, double c) {
  require(n > 0 && p > 0, "default_lambda: sizes must be positive");
  return c * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

PrecisionEstimate estimate_precision(const Matrix& y, std::optional<Vector> lambdas, unsigned threads,
                                     const NodewiseOptions& opts) {
  const Index n = y.rows();
  const Index p = y.cols();
  require(n > 10, "estimate_precision: need more than 10 observations");
  require(p >= 2, "estimate_precision: need at least two columns");
  require(y.allFinite(), "estimate_precision: data contain non-finite values");

  PrecisionEstimate est;
  est.lambdas = lambdas ? std::move(*lambdas) : Vector::Constant(p, default_lambda(n, p));
  require(est.lambdas.size() == p, "estimate_precision: need one lambda per column");

  const Matrix centered = y.rowwise() - y.colwise().mean();
  est.fits.resize(static_cast<std::size_t>(p));
  detail::parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t j) {
    est.fits[j] = fit_nodewise(centered, static_cast<Index>(j), est.lambdas(static_cast<Index>(j)), opts);
  });
  for (const auto& f : est.fits) {
    if (!f.converged) {
      fail(ErrorKind::Divergence, "nodewise fit for column " + std::to_string(f.node) +
                                      " did not converge");
    }
  }
  est.v_hat = debiased_v(est.fits, centered);
  est.omega_hat = precision_assemble(est.v_hat);
  return est;
}

}  // namespace tailrisk
