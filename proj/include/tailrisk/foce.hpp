#pragma once

#include "tailrisk/centrality.hpp"
#include "tailrisk/tail_risk.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

enum class FoceObjective {
  Auto,             // min-variance loss when the matrix is PD, else spectral radius
  MinVarianceLoss,  // 1 / (1' G_S^{-1} 1)
  SpectralRadius,   // max |eig(G_S)|
};

std::string_view to_string(FoceObjective objective) noexcept;
FoceObjective parse_foce_objective(std::string_view name);

struct FoceConfig {
  CentralityKind centrality_kind = CentralityKind::Eigenvector;
  CentralityParams centrality_params;
  /// Stop once |F_k - F_{k-1}| <= epsilon. Zero runs until one node is left
  /// unless two consecutive values coincide exactly.
  double epsilon = 1e-6;
  FoceObjective objective = FoceObjective::Auto;
  /// Scores within this relative distance of the maximum count as tied; the
  /// lowest index among them is removed.
  double tie_tolerance = 1e-9;
};

struct FoceOrdering {
  std::vector<std::string> removed;
  std::vector<Index> removed_index;
  Vector objective_trace;  // F after each removal
  double initial_objective = 0.0;
  Index stop_index = 0;    // number of removals performed
  std::vector<std::string> selected_set;
  std::vector<Index> selected_index;
  /// Top score minus runner-up at each step (0 when one candidate).
  Vector score_gap;
  /// Steps (0-based) whose centrality failed and used degree instead.
  std::vector<Index> fallback_steps;
  std::vector<std::string> fallback_reasons;
  FoceObjective objective = FoceObjective::MinVarianceLoss;
};

/// Objective value of the principal submatrix on `nodes`.
double foce_objective(const Matrix& gamma, const std::vector<Index>& nodes, FoceObjective objective);

/// Backward centrality exclusion: repeatedly drop the most central node of
/// the surviving graph until the objective settles or one node remains.
FoceOrdering foce_order(const RiskMatrix& gamma, const FoceConfig& cfg);

/// True iff each estimate reproduces the population removal sequence up to
/// the population stop index.
bool oracle_property_check(const RiskMatrix& population, const FoceConfig& cfg,
                           const std::vector<RiskMatrix>& estimates);

}  // namespace tailrisk
