#pragma once

#include "tailrisk/linalg.hpp"
#include "tailrisk/quantile.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tailrisk {

/// Aligned asset returns (N x T) and lagged-predictor state series (p x T).
class PanelData {
 public:
  PanelData(std::vector<std::string> asset_names, Matrix returns,
            std::vector<std::string> state_names, Matrix state,
            std::vector<std::string> timestamps);

  Index assets() const noexcept { return returns_.rows(); }
  Index periods() const noexcept { return returns_.cols(); }
  Index state_dim() const noexcept { return state_.rows(); }

  const std::vector<std::string>& asset_names() const noexcept { return asset_names_; }
  const std::vector<std::string>& state_names() const noexcept { return state_names_; }
  const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }
  const Matrix& returns() const noexcept { return returns_; }
  const Matrix& state() const noexcept { return state_; }

  /// Columns [start, start + length) as a new panel.
  PanelData window(Index start, Index length) const;

  /// Keeps only the listed assets, in the given order.
  PanelData select_assets(const std::vector<Index>& idx) const;

 private:
  std::vector<std::string> asset_names_;
  Matrix returns_;
  std::vector<std::string> state_names_;
  Matrix state_;
  std::vector<std::string> timestamps_;
};

struct VarFit {
  QuantileFit fit;
  double forecast = 0.0;
};

/// Raw-sign one-step forecasts plus their positive-loss transforms.
struct TailForecasts {
  /// |negated VaR| per node.
  Vector var_plus;
  /// covar(j,i): negated one-step CoVaR of node j given node i; diagonal unused.
  Matrix covar;
  /// delta_covar(j,i): negated (CoVaR_{j|i} - VaR_j); diagonal zero.
  Matrix delta_covar;
  double tau = 0.05;
  std::vector<std::string> node_ids;
};

struct RiskMatrix {
  Matrix gamma;
  double tau = 0.05;
  bool is_positive_definite = false;
  double min_eigenvalue = 0.0;
  std::vector<std::string> node_ids;
};

inline constexpr double kPdTolerance = 1e-10;

/// Regresses R_i,t on (1, X_{t-1}) for t = 1..T-1 and forecasts at X_{T-1}.
VarFit fit_var_node(const PanelData& panel, Index i, QuantileLevel tau);

/// Regresses R_j,t on (1, X_{t-1}, R_i,t); the forecast substitutes the
/// fitted VaR of node i for its realized return.
double fit_covar_pair(const PanelData& panel, Index j, Index i, double var_forecast_i,
                      QuantileLevel tau);

/// Same as fit_covar_pair but also returns the underlying fit.
std::pair<QuantileFit, double> fit_covar_pair_detailed(const PanelData& panel, Index j,
                                                       Index i, double var_forecast_i,
                                                       QuantileLevel tau);

/// Runs all N VaR fits and N(N-1) CoVaR fits, spread over `threads` workers
/// (0 = hardware concurrency). Output does not depend on the thread count.
TailForecasts forecast_all(const PanelData& panel, QuantileLevel tau, unsigned threads = 0);

/// Geometric-mean scaled directional matrix, symmetrized.
RiskMatrix build_risk_matrix(const TailForecasts& f);

/// Recomputes the PD diagnostics for an arbitrary symmetric matrix.
RiskMatrix make_risk_matrix(Matrix gamma, double tau, std::vector<std::string> node_ids = {});

struct DodDecomposition {
  Vector diag_sqrt;
  Matrix core;
};

DodDecomposition decompose_dod(const RiskMatrix& gamma);

Matrix precision_of(const RiskMatrix& gamma);

struct DatedRiskMatrix {
  std::string timestamp;
  RiskMatrix risk;
};

std::vector<DatedRiskMatrix> rolling_forecast(const PanelData& panel, Index window,
                                              Index step, QuantileLevel tau,
                                              unsigned threads = 0);

}  // namespace tailrisk
