#include "tailrisk/quantile.hpp"

#include "tailrisk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace tailrisk {

QuantileLevel::QuantileLevel(double tau) : tau_(tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    fail(ErrorKind::InvalidArgument,
         "quantile level must lie in (0,1), got " + std::to_string(tau));
  }
}

Design::Design(Matrix values) : values_(std::move(values)) {
  require(values_.cols() >= 1, "design needs at least the intercept column");
  require(values_.rows() >= values_.cols(),
          "design needs at least as many rows as columns");
  require(all_finite(values_), "design contains non-finite entries");
  for (Index t = 0; t < values_.rows(); ++t) {
    require(values_(t, 0) == 1.0, "design column 0 must be the intercept");
  }
}

Design Design::with_intercept(const Matrix& regressors) {
  Matrix m(regressors.rows(), regressors.cols() + 1);
  m.col(0).setOnes();
  m.rightCols(regressors.cols()) = regressors;
  return Design(std::move(m));
}

double check_loss(double u, QuantileLevel tau) {
  if (!std::isfinite(u)) fail(ErrorKind::InvalidArgument, "check_loss: non-finite residual");
  const double t = tau.value();
  return u >= 0.0 ? t * u : (t - 1.0) * u;
}

double check_objective(const Matrix& x, const Vector& y, const Vector& theta,
                       QuantileLevel tau) {
  const Vector r = y - x * theta;
  double s = 0.0;
  for (Index t = 0; t < r.size(); ++t) s += check_loss(r(t), tau);
  return s;
}

namespace {

double objective_of(const Vector& r, double tau) {
  double s = 0.0;
  for (Index t = 0; t < r.size(); ++t) s += r(t) >= 0.0 ? tau * r(t) : (tau - 1.0) * r(t);
  return s;
}

// Slope of s -> rho(r - s*g) at s = 0+.
double one_sided_slope(double r, double g, double tau, double zero_tol) {
  if (r > zero_tol) return -tau * g;
  if (r < -zero_tol) return (1.0 - tau) * g;
  return g > 0.0 ? (1.0 - tau) * g : -tau * g;
}

struct Solver {
  const Matrix& x;
  const Vector& y;
  double tau;
  double zero_tol;
  QuantileFit& fit;

  Vector theta;
  Vector r;
  double obj = 0.0;

  void set_theta(const Vector& th) {
    theta = th;
    r = y - x * theta;
    obj = objective_of(r, tau);
  }

  void record() { fit.objective_trace.push_back(obj); }

  // Smoothed majorize-minimize: quadratic majorizer of |r| at the current
  // residuals, with smoothing eps annealed geometrically. Each accepted step
  // must not increase the true check-loss objective.
  void majorize_minimize(const QuantileOptions& opts, double scale, int& iters) {
    const Index n = x.rows();
    const Index k = x.cols();
    const double eps_end = opts.smoothing_end * scale;
    double eps = opts.smoothing_start * scale;
    const double decay = std::pow(10.0, -0.25);
    int stalled = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
      ++iters;
      Matrix xtwx = Matrix::Zero(k, k);
      Vector rhs = Vector::Zero(k);
      for (Index t = 0; t < n; ++t) {
        const double w = 1.0 / (std::abs(r(t)) + eps);
        xtwx.selfadjointView<Eigen::Lower>().rankUpdate(x.row(t).transpose(), w);
        rhs += x.row(t).transpose() * (w * y(t) + (2.0 * tau - 1.0));
      }
      const Matrix full = xtwx.selfadjointView<Eigen::Lower>();
      Eigen::LDLT<Matrix> ldlt(full);
      Vector cand = ldlt.solve(rhs);
      bool accepted = false;
      if (ldlt.info() == Eigen::Success && cand.allFinite()) {
        const Vector step = cand - theta;
        double frac = 1.0;
        for (int m = 0; m < 30; ++m, frac *= 0.5) {
          const Vector th = theta + frac * step;
          const Vector rr = y - x * th;
          const double o = objective_of(rr, tau);
          if (o <= obj) {
            const double gain = obj - o;
            theta = th;
            r = rr;
            obj = o;
            accepted = true;
            stalled = gain <= 1e-14 * (1.0 + obj) ? stalled + 1 : 0;
            break;
          }
        }
      }
      if (accepted) record();
      else ++stalled;
      if (eps > eps_end) {
        eps = std::max(eps * decay, eps_end);
      } else if (stalled >= 3) {
        break;
      }
    }
  }

  // Moves from an arbitrary point to a vertex (k linearly independent zero
  // residuals) without increasing the objective.
  std::vector<Index> purify() {
    const Index n = x.rows();
    const Index k = x.cols();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(r(a)) < std::abs(r(b)); });

    std::vector<Index> basis;
    Matrix rows(0, k);
    auto try_add = [&](Index t) {
      Matrix cand(rows.rows() + 1, k);
      cand.topRows(rows.rows()) = rows;
      cand.row(rows.rows()) = x.row(t);
      Eigen::FullPivLU<Matrix> lu(cand);
      lu.setThreshold(1e-10);
      if (lu.rank() == cand.rows()) {
        rows = std::move(cand);
        basis.push_back(t);
        return true;
      }
      return false;
    };
    for (Index t : order) {
      if (static_cast<Index>(basis.size()) == k) break;
      if (std::abs(r(t)) > zero_tol) break;
      try_add(t);
    }

    while (static_cast<Index>(basis.size()) < k) {
      Vector d;
      if (basis.empty()) {
        d = Vector::Unit(k, 0);
      } else {
        Eigen::FullPivLU<Matrix> lu(rows);
        d = lu.kernel().col(0);
      }
      const Vector g = x * d;
      double slope = 0.0;
      std::vector<char> in_basis(n, 0);
      for (Index b : basis) in_basis[b] = 1;
      for (Index t = 0; t < n; ++t) {
        if (!in_basis[t]) slope += one_sided_slope(r(t), g(t), tau, zero_tol);
      }
      if (slope > 0.0) {
        d = -d;
      }
      const Vector gd = slope > 0.0 ? Vector(-g) : g;
      double best = std::numeric_limits<double>::infinity();
      Index enter = -1;
      for (Index t = 0; t < n; ++t) {
        if (in_basis[t] || gd(t) == 0.0) continue;
        const double s = r(t) / gd(t);
        if (s >= 0.0 && s < best) {
          best = s;
          enter = t;
        }
      }
      if (enter < 0) break;
      const Vector th = theta + best * d;
      theta = th;
      r = y - x * theta;
      r(enter) = 0.0;
      obj = objective_of(r, tau);
      if (!try_add(enter)) break;
    }
    return basis;
  }

  // Vertex-exchange descent along the 2k edges of the current basis with an
  // exact line search (weighted-median step) on each accepted edge.
  bool vertex_descent(std::vector<Index> basis, int max_pivots, int& iters) {
    const Index n = x.rows();
    const Index k = x.cols();
    if (static_cast<Index>(basis.size()) != k) return false;
    std::vector<char> in_basis(n, 0);
    for (Index b : basis) in_basis[b] = 1;

    auto vertex_theta = [&]() {
      Matrix xb(k, k);
      Vector yb(k);
      for (Index h = 0; h < k; ++h) {
        xb.row(h) = x.row(basis[h]);
        yb(h) = y(basis[h]);
      }
      Eigen::PartialPivLU<Matrix> lu(xb);
      return std::pair<Vector, Matrix>{lu.solve(yb), lu.inverse()};
    };

    auto [th0, binv] = vertex_theta();
    {
      Vector rr = y - x * th0;
      for (Index b : basis) rr(b) = 0.0;
      const double o = objective_of(rr, tau);
      // Snapping onto the exact vertex can only cost rounding error.
      theta = th0;
      r = rr;
      obj = o;
    }

    std::vector<std::pair<double, double>> brk;
    for (int pivot = 0; pivot < max_pivots; ++pivot) {
      double best_slope = 0.0;
      Index best_h = -1;
      double best_sigma = 0.0;
      Vector best_g;
      for (Index h = 0; h < k; ++h) {
        const Vector dh = binv.col(h);
        const Vector g = x * dh;
        double gscale = 1.0;
        for (Index t = 0; t < n; ++t) {
          if (in_basis[t]) continue;
          gscale += std::abs(g(t));
        }
        for (double sigma : {1.0, -1.0}) {
          double slope = sigma > 0.0 ? 1.0 - tau : tau;
          for (Index t = 0; t < n; ++t) {
            if (in_basis[t]) continue;
            slope += one_sided_slope(r(t), sigma * g(t), tau, zero_tol);
          }
          const double normalized = slope / gscale;
          if (normalized < best_slope - 1e-13) {
            best_slope = normalized;
            best_h = h;
            best_sigma = sigma;
            best_g = sigma * g;
          }
        }
      }
      if (best_h < 0) return true;

      // Line search along theta + s*d, d = sigma * binv.col(h).
      double slope = best_sigma > 0.0 ? 1.0 - tau : tau;
      brk.clear();
      for (Index t = 0; t < n; ++t) {
        if (in_basis[t]) continue;
        slope += one_sided_slope(r(t), best_g(t), tau, zero_tol);
        if (std::abs(r(t)) > zero_tol && best_g(t) != 0.0) {
          const double s = r(t) / best_g(t);
          if (s > 0.0) brk.emplace_back(s, static_cast<double>(t));
        }
      }
      std::sort(brk.begin(), brk.end());
      Index enter = -1;
      for (const auto& [s, tt] : brk) {
        const auto t = static_cast<Index>(tt);
        slope += std::abs(best_g(t));
        if (slope >= 0.0) {
          enter = t;
          break;
        }
      }
      if (enter < 0) return false;

      const Index leave = basis[best_h];
      basis[best_h] = enter;
      in_basis[leave] = 0;
      in_basis[enter] = 1;
      ++iters;
      auto [th, bi] = vertex_theta();
      Vector rr = y - x * th;
      for (Index b : basis) rr(b) = 0.0;
      const double o = objective_of(rr, tau);
      if (!(o <= obj + 1e-12 * (1.0 + obj))) {
        // Rounding made the exchange non-improving; stop at the current vertex.
        return true;
      }
      theta = th;
      binv = bi;
      r = rr;
      obj = o;
      record();
    }
    return false;
  }
};

}  // namespace

QuantileFit fit_quantile(const Design& design, const Vector& y, QuantileLevel tau,
                         const QuantileOptions& opts) {
  const Matrix& x = design.values();
  const Index n = x.rows();
  const Index k = x.cols();
  require(y.size() == n, "fit_quantile: response length does not match design rows");
  require(y.allFinite(), "fit_quantile: response contains non-finite entries");

  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    fail(ErrorKind::RankDeficient, "fit_quantile: design has rank " +
                                       std::to_string(qr.rank()) + " < " +
                                       std::to_string(k) + " columns");
  }

  QuantileFit fit;
  fit.tau = tau.value();
  const double yscale = 1.0 + y.cwiseAbs().maxCoeff();
  Solver solver{x, y, tau.value(), 1e-12 * yscale, fit, {}, {}, 0.0};

  solver.set_theta(qr.solve(y));
  solver.record();
  int iters = 0;
  const double scale = solver.r.cwiseAbs().mean();
  if (scale > 1e-14 * yscale) {
    solver.majorize_minimize(opts, scale, iters);
  }
  std::vector<Index> basis = solver.purify();
  const int max_pivots = opts.max_pivots_per_row * static_cast<int>(std::max<Index>(n, 1));
  fit.converged = solver.vertex_descent(std::move(basis), max_pivots, iters);

  fit.coefficients = solver.theta;
  fit.residuals = y - x * fit.coefficients;
  fit.objective = objective_of(fit.residuals, tau.value());
  fit.iterations = iters;
  return fit;
}

double predict(const QuantileFit& fit, const Vector& x) {
  require(x.size() == fit.coefficients.size(),
          "predict: regressor length " + std::to_string(x.size()) +
              " does not match " + std::to_string(fit.coefficients.size()) +
              " coefficients");
  return x.dot(fit.coefficients);
}

}  // namespace tailrisk
