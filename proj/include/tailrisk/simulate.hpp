#pragma once

#include "tailrisk/linalg.hpp"
#include "tailrisk/tail_risk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tailrisk {

/// Low-rank multivariate regression design: Gaussian X with Toeplitz
/// covariance ar_decay^|i-j|, Y = X * Gamma + eps with rank(Gamma) = rank.
struct SimSpec {
  Index n = 100;
  Index m = 100;
  Index p = 100;
  Index rank = 3;
  double ar_decay = 0.5;
  std::uint64_t seed = 0;
};

struct DgpSample {
  Matrix x;           // n x p
  Matrix y;           // n x m
  Matrix gamma_true;  // p x m
  Matrix sigma;       // p x p population covariance of the rows of x
};

Matrix toeplitz_decay(Index p, double decay);

/// Gamma = U * diag(d) * V' with U (p x r), V (m x r) Haar-orthonormal and
/// d linearly spaced from 2 down to 1.
DgpSample simulate_dgp(const SimSpec& spec);

/// Return panel with AR(1) Gaussian states and Gaussian innovations whose
/// cross-sectional correlation is `dependence`:
///   X_t = state_ar * X_{t-1} + eta_t,      eta ~ N(0, I_p)
///   R_t = intercept + state_loading * X_{t-1} + L z_t,  L L' = dependence
/// so every conditional quantile is available in closed form.
struct PanelSimSpec {
  Index assets = 2;
  Index state_dim = 1;
  Index periods = 500;
  Matrix dependence;     // N x N, unit diagonal, PSD; empty means identity
  Matrix state_loading;  // N x p; empty means zero
  Vector intercept;      // N; empty means zero
  double state_ar = 0.5;
  std::uint64_t seed = 0;
  std::string start_date = "2000-01-01";
};

PanelData simulate_return_panel(const PanelSimSpec& spec);

PanelData simulate_return_panel(Index assets, Index state_dim, Index periods,
                                const Matrix& dependence, std::uint64_t seed);

/// ISO-8601 calendar dates for consecutive days starting at `start`.
std::vector<std::string> consecutive_dates(const std::string& start, Index count);

}  // namespace tailrisk
