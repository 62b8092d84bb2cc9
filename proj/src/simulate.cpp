#include "tailrisk/simulate.hpp"

#include "tailrisk/error.hpp"
#include "tailrisk/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace tailrisk {

Matrix toeplitz_decay(Index p, double decay) {
  Matrix s(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) s(i, j) = std::pow(decay, static_cast<double>(std::abs(i - j)));
  return s;
}

namespace {

Matrix gaussian(CounterRng& rng, Index r, Index c) {
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix haar_orthonormal(CounterRng& rng, Index rows, Index cols) {
  const Matrix g = gaussian(rng, rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index k = 0; k < cols; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  return q;
}

// Symmetric square root factor L with L L' = a, valid for singular PSD a.
Matrix psd_factor(const Matrix& a) {
  const auto spec = symmetric_eigen(a);
  Vector root(spec.values.size());
  for (Index k = 0; k < root.size(); ++k) root(k) = std::sqrt(std::max(spec.values(k), 0.0));
  return spec.vectors * root.asDiagonal();
}

}  // namespace

DgpSample simulate_dgp(const SimSpec& spec) {
  require(spec.n >= 1 && spec.m >= 1 && spec.p >= 1, "simulate_dgp: sizes must be positive");
  require(spec.rank >= 1 && spec.rank <= std::min(spec.p, spec.m),
          "simulate_dgp: rank must lie in [1, min(p, m)]");
  require(spec.ar_decay >= 0.0 && spec.ar_decay < 1.0, "simulate_dgp: ar_decay must lie in [0,1)");
  CounterRng rng(spec.seed);
  DgpSample out;
  out.sigma = toeplitz_decay(spec.p, spec.ar_decay);
  Eigen::LLT<Matrix> llt(out.sigma);
  const Matrix lower = llt.matrixL();
  out.x = gaussian(rng, spec.n, spec.p) * lower.transpose();

  const Matrix u = haar_orthonormal(rng, spec.p, spec.rank);
  const Matrix v = haar_orthonormal(rng, spec.m, spec.rank);
  Vector d(spec.rank);
  for (Index k = 0; k < spec.rank; ++k) {
    d(k) = spec.rank == 1 ? 2.0 : 2.0 - static_cast<double>(k) / static_cast<double>(spec.rank - 1);
  }
  out.gamma_true = u * d.asDiagonal() * v.transpose();
  out.y = out.x * out.gamma_true + gaussian(rng, spec.n, spec.m);
  return out;
}

std::vector<std::string> consecutive_dates(const std::string& start, Index count) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (std::sscanf(start.c_str(), "%d-%u-%u", &y, &m, &d) != 3) {
    fail(ErrorKind::InvalidArgument, "start date must be YYYY-MM-DD: " + start);
  }
  using namespace std::chrono;
  const year_month_day first{year{y}, month{m}, day{d}};
  require(first.ok(), "invalid start date: " + start);
  sys_days day0{first};
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  char buf[16];
  for (Index k = 0; k < count; ++k) {
    const year_month_day ymd{day0 + days{k}};
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    out.emplace_back(buf);
  }
  return out;
}

PanelData simulate_return_panel(const PanelSimSpec& spec) {
  const Index n = spec.assets;
  const Index p = spec.state_dim;
  const Index t = spec.periods;
  require(n >= 2 && p >= 0 && t >= 1, "simulate_return_panel: invalid sizes");
  require(spec.state_ar > -1.0 && spec.state_ar < 1.0, "simulate_return_panel: |state_ar| must be < 1");

  Matrix dep = spec.dependence.size() ? spec.dependence : Matrix::Identity(n, n);
  if (dep.rows() != n || dep.cols() != n || !is_exactly_symmetric(dep)) {
    fail(ErrorKind::InvalidArgument, "dependence must be a symmetric N x N matrix");
  }
  for (Index i = 0; i < n; ++i) {
    if (dep(i, i) != 1.0) fail(ErrorKind::InvalidArgument, "dependence must have unit diagonal");
  }
  if (symmetric_eigen(dep).values(0) < -1e-12) {
    fail(ErrorKind::InvalidArgument, "dependence must be positive semidefinite");
  }
  const Matrix load = spec.state_loading.size() ? spec.state_loading : Matrix::Zero(n, p);
  require(load.rows() == n && load.cols() == p, "state_loading must be N x p");
  const Vector icpt = spec.intercept.size() ? spec.intercept : Vector::Zero(n);
  require(icpt.size() == n, "intercept must have length N");

  CounterRng rng(spec.seed);
  const Matrix factor = psd_factor(dep);
  const double stationary_sd = 1.0 / std::sqrt(1.0 - spec.state_ar * spec.state_ar);

  Vector prev(p);
  for (Index k = 0; k < p; ++k) prev(k) = stationary_sd * rng.normal();
  Matrix state(p, t);
  Matrix returns(n, t);
  Vector z(n);
  for (Index s = 0; s < t; ++s) {
    for (Index i = 0; i < n; ++i) z(i) = rng.normal();
    returns.col(s) = icpt + load * prev + factor * z;
    for (Index k = 0; k < p; ++k) state(k, s) = spec.state_ar * prev(k) + rng.normal();
    prev = state.col(s);
  }

  std::vector<std::string> names;
  for (Index i = 0; i < n; ++i) names.push_back("A" + std::to_string(i + 1));
  std::vector<std::string> snames;
  for (Index k = 0; k < p; ++k) snames.push_back("X" + std::to_string(k + 1));
  return PanelData(std::move(names), std::move(returns), std::move(snames), std::move(state),
                   consecutive_dates(spec.start_date, t));
}

PanelData simulate_return_panel(Index assets, Index state_dim, Index periods,
                                const Matrix& dependence, std::uint64_t seed) {
  PanelSimSpec spec;
  spec.assets = assets;
  spec.state_dim = state_dim;
  spec.periods = periods;
  spec.dependence = dependence;
  spec.seed = seed;
  return simulate_return_panel(spec);
}

}  // namespace tailrisk
