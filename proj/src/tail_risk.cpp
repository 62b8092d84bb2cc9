#include "tailrisk/tail_risk.hpp"

#include "parallel.hpp"
#include "tailrisk/error.hpp"

#include <cmath>
#include <string>

namespace tailrisk {

PanelData::PanelData(std::vector<std::string> asset_names, Matrix returns,
                     std::vector<std::string> state_names, Matrix state,
                     std::vector<std::string> timestamps)
    : asset_names_(std::move(asset_names)),
      returns_(std::move(returns)),
      state_names_(std::move(state_names)),
      state_(std::move(state)),
      timestamps_(std::move(timestamps)) {
  const Index n = returns_.rows();
  const Index t = returns_.cols();
  const Index p = state_.rows();
  require(n >= 2, "panel needs at least 2 assets");
  require(static_cast<Index>(asset_names_.size()) == n, "panel: asset name count mismatch");
  require(static_cast<Index>(state_names_.size()) == p, "panel: state name count mismatch");
  require(state_.cols() == t || (p == 0), "panel: state and returns have different lengths");
  if (p == 0) state_.resize(0, t);
  require(static_cast<Index>(timestamps_.size()) == t, "panel: timestamp count mismatch");
  require(t >= p + 3, "panel needs T >= p + 3 (T=" + std::to_string(t) +
                          ", p=" + std::to_string(p) + ")");
  require(returns_.allFinite() && state_.allFinite(), "panel contains non-finite entries");
  for (std::size_t k = 1; k < timestamps_.size(); ++k) {
    require(timestamps_[k - 1] < timestamps_[k],
            "panel timestamps must be strictly increasing at '" + timestamps_[k] + "'");
  }
}

PanelData PanelData::window(Index start, Index length) const {
  require(start >= 0 && length >= 0 && start + length <= periods(),
          "panel window out of range");
  std::vector<std::string> ts(timestamps_.begin() + start,
                              timestamps_.begin() + start + length);
  return PanelData(asset_names_, returns_.middleCols(start, length), state_names_,
                   state_.middleCols(start, length), std::move(ts));
}

PanelData PanelData::select_assets(const std::vector<Index>& idx) const {
  Matrix r(static_cast<Index>(idx.size()), periods());
  std::vector<std::string> names;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    require(idx[k] >= 0 && idx[k] < assets(), "select_assets: index out of range");
    r.row(static_cast<Index>(k)) = returns_.row(idx[k]);
    names.push_back(asset_names_[static_cast<std::size_t>(idx[k])]);
  }
  return PanelData(std::move(names), std::move(r), state_names_, state_, timestamps_);
}

namespace {

// Rows t = 1..T-1 of (1, X_{t-1}[, extra_t]).
Matrix lagged_design(const PanelData& panel, const Vector* extra) {
  const Index t = panel.periods();
  const Index p = panel.state_dim();
  const Index k = 1 + p + (extra ? 1 : 0);
  Matrix d(t - 1, k);
  d.col(0).setOnes();
  if (p > 0) d.middleCols(1, p) = panel.state().leftCols(t - 1).transpose();
  if (extra) d.col(k - 1) = extra->tail(t - 1);
  return d;
}

Vector forecast_regressors(const PanelData& panel, const double* extra) {
  const Index p = panel.state_dim();
  Vector x(1 + p + (extra ? 1 : 0));
  x(0) = 1.0;
  if (p > 0) x.segment(1, p) = panel.state().col(panel.periods() - 1);
  if (extra) x(x.size() - 1) = *extra;
  return x;
}

}  // namespace

VarFit fit_var_node(const PanelData& panel, Index i, QuantileLevel tau) {
  require(i >= 0 && i < panel.assets(), "fit_var_node: node index out of range");
  const Index t = panel.periods();
  const Vector y = panel.returns().row(i).tail(t - 1).transpose();
  try {
    VarFit out;
    out.fit = fit_quantile(Design(lagged_design(panel, nullptr)), y, tau);
    out.forecast = predict(out.fit, forecast_regressors(panel, nullptr));
    return out;
  } catch (const Error& e) {
    throw Error(e.kind(), "VaR fit for node " + panel.asset_names()[static_cast<std::size_t>(i)] +
                              ": " + e.what());
  }
}

std::pair<QuantileFit, double> fit_covar_pair_detailed(const PanelData& panel, Index j,
                                                       Index i, double var_forecast_i,
                                                       QuantileLevel tau) {
  require(i >= 0 && i < panel.assets() && j >= 0 && j < panel.assets(),
          "fit_covar_pair: node index out of range");
  require(i != j, "fit_covar_pair: conditioning node must differ from target node");
  const Index t = panel.periods();
  const Vector y = panel.returns().row(j).tail(t - 1).transpose();
  const Vector cond = panel.returns().row(i).transpose();
  try {
    QuantileFit fit = fit_quantile(Design(lagged_design(panel, &cond)), y, tau);
    const double f = predict(fit, forecast_regressors(panel, &var_forecast_i));
    return {std::move(fit), f};
  } catch (const Error& e) {
    const auto& names = panel.asset_names();
    throw Error(e.kind(), "CoVaR fit for pair (" + names[static_cast<std::size_t>(j)] + " | " +
                              names[static_cast<std::size_t>(i)] + "): " + e.what());
  }
}

double fit_covar_pair(const PanelData& panel, Index j, Index i, double var_forecast_i,
                      QuantileLevel tau) {
  return fit_covar_pair_detailed(panel, j, i, var_forecast_i, tau).second;
}

TailForecasts forecast_all(const PanelData& panel, QuantileLevel tau, unsigned threads) {
  const Index n = panel.assets();
  Vector var_raw(n);
  detail::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    var_raw(static_cast<Index>(i)) = fit_var_node(panel, static_cast<Index>(i), tau).forecast;
  });

  Matrix covar_raw = Matrix::Zero(n, n);
  const auto pairs = static_cast<std::size_t>(n * (n - 1));
  detail::parallel_for(pairs, threads, [&](std::size_t task) {
    const auto j = static_cast<Index>(task) / (n - 1);
    auto i = static_cast<Index>(task) % (n - 1);
    if (i >= j) ++i;
    covar_raw(j, i) = fit_covar_pair(panel, j, i, var_raw(i), tau);
  });

  TailForecasts f;
  f.tau = tau.value();
  f.node_ids = panel.asset_names();
  f.var_plus = (-var_raw).cwiseAbs();
  f.covar = Matrix::Zero(n, n);
  f.delta_covar = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      f.covar(j, i) = -covar_raw(j, i);
      f.delta_covar(j, i) = -(covar_raw(j, i) - var_raw(j));
    }
  }
  return f;
}

RiskMatrix make_risk_matrix(Matrix gamma, double tau, std::vector<std::string> node_ids) {
  require(gamma.rows() == gamma.cols(), "risk matrix must be square");
  require(is_exactly_symmetric(gamma), "risk matrix must be exactly symmetric");
  require(gamma.allFinite(), "risk matrix contains non-finite entries");
  RiskMatrix out;
  const auto spec = symmetric_eigen(gamma);
  out.min_eigenvalue = spec.values.size() ? spec.values(0) : 0.0;
  const double scale = spec.values.size() ? spec.values.cwiseAbs().maxCoeff() : 0.0;
  out.is_positive_definite = spec.values.size() > 0 && out.min_eigenvalue > kPdTolerance * scale;
  out.gamma = std::move(gamma);
  out.tau = tau;
  if (node_ids.empty()) {
    for (Index i = 0; i < out.gamma.rows(); ++i) node_ids.push_back("n" + std::to_string(i + 1));
  }
  require(static_cast<Index>(node_ids.size()) == out.gamma.rows(), "node id count mismatch");
  out.node_ids = std::move(node_ids);
  return out;
}

RiskMatrix build_risk_matrix(const TailForecasts& f) {
  const Index n = f.var_plus.size();
  require(f.delta_covar.rows() == n && f.delta_covar.cols() == n,
          "build_risk_matrix: dimension mismatch");
  for (Index i = 0; i < n; ++i) {
    if (!(f.var_plus(i) > 0.0)) {
      fail(ErrorKind::NonPositiveVar, "build_risk_matrix: var_plus[" + std::to_string(i) +
                                          "] = " + std::to_string(f.var_plus(i)) +
                                          " is not positive");
    }
  }
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      m(j, i) = i == j ? f.var_plus(i)
                       : std::sqrt(f.var_plus(j) * f.var_plus(i)) * f.delta_covar(j, i);
    }
  }
  Matrix gamma(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) gamma(i, j) = 0.5 * (m(i, j) + m(j, i));
  }
  return make_risk_matrix(std::move(gamma), f.tau, f.node_ids);
}

DodDecomposition decompose_dod(const RiskMatrix& gamma) {
  const Matrix& g = gamma.gamma;
  const Index n = g.rows();
  DodDecomposition d;
  d.diag_sqrt.resize(n);
  for (Index i = 0; i < n; ++i) {
    if (!(g(i, i) > 0.0)) {
      fail(ErrorKind::Domain, "decompose_dod: diagonal entry " + std::to_string(i) +
                                  " is not strictly positive");
    }
    d.diag_sqrt(i) = std::sqrt(g(i, i));
  }
  d.core.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      d.core(i, j) = i == j ? 1.0 : g(i, j) / (d.diag_sqrt(i) * d.diag_sqrt(j));
    }
  }
  return d;
}

Matrix precision_of(const RiskMatrix& gamma) {
  if (!gamma.is_positive_definite) {
    fail(ErrorKind::Singular, "precision_of: risk matrix is not positive definite "
                              "(min eigenvalue " + std::to_string(gamma.min_eigenvalue) + ")");
  }
  return spd_inverse(gamma.gamma);
}

std::vector<DatedRiskMatrix> rolling_forecast(const PanelData& panel, Index window,
                                              Index step, QuantileLevel tau,
                                              unsigned threads) {
  const Index p = panel.state_dim();
  require(window >= p + 3, "rolling_forecast: window " + std::to_string(window) +
                               " is smaller than p + 3 = " + std::to_string(p + 3));
  require(window <= panel.periods(), "rolling_forecast: window exceeds panel length");
  require(step >= 1, "rolling_forecast: step must be positive");
  std::vector<DatedRiskMatrix> out;
  for (Index s = 0; s + window <= panel.periods(); s += step) {
    const PanelData w = panel.window(s, window);
    RiskMatrix r = build_risk_matrix(forecast_all(w, tau, threads));
    out.push_back({w.timestamps().back(), std::move(r)});
  }
  return out;
}

}  // namespace tailrisk
