#include "tailrisk/foce.hpp"

#include "tailrisk/error.hpp"
#include "tailrisk/portfolio.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tailrisk {

std::string_view to_string(FoceObjective objective) noexcept {
  switch (objective) {
    case FoceObjective::Auto: return "auto";
    case FoceObjective::MinVarianceLoss: return "min_variance_loss";
    case FoceObjective::SpectralRadius: return "spectral_radius";
  }
  return "unknown";
}

FoceObjective parse_foce_objective(std::string_view name) {
  for (auto o : {FoceObjective::Auto, FoceObjective::MinVarianceLoss, FoceObjective::SpectralRadius}) {
    if (to_string(o) == name) return o;
  }
  fail(ErrorKind::InvalidArgument, "unknown FOCE objective '" + std::string(name) + "'");
}

double foce_objective(const Matrix& gamma, const std::vector<Index>& nodes, FoceObjective objective) {
  require(!nodes.empty(), "foce_objective: empty node set");
  const Matrix sub = principal_submatrix(gamma, nodes);
  switch (objective) {
    case FoceObjective::MinVarianceLoss: {
      const Vector x = spd_solve(sub, Vector::Ones(sub.rows()));
      return 1.0 / x.sum();
    }
    case FoceObjective::SpectralRadius:
      return symmetric_eigen(sub).values.cwiseAbs().maxCoeff();
    case FoceObjective::Auto: break;
  }
  fail(ErrorKind::InvalidArgument, "foce_objective: objective must be resolved");
}

namespace {

struct Pick {
  Index position = 0;
  double gap = 0.0;
};

Pick argmax_lowest(const Vector& s, double tol) {
  const double top = s.maxCoeff();
  const double slack = tol * std::max(1.0, std::abs(top));
  Pick p;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) >= top - slack) {
      p.position = i;
      break;
    }
  }
  double runner = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < s.size(); ++i)
    if (i != p.position) runner = std::max(runner, s(i));
  p.gap = s.size() > 1 ? s(p.position) - runner : 0.0;
  return p;
}

}  // namespace

FoceOrdering foce_order(const RiskMatrix& gamma, const FoceConfig& cfg) {
  const Matrix& g = gamma.gamma;
  const Index n = g.rows();
  require(n >= 2 && g.cols() == n, "foce_order: need a square matrix with N >= 2");
  require(g.allFinite() && is_exactly_symmetric(g), "foce_order: matrix must be finite and symmetric");
  require(cfg.epsilon >= 0.0 && std::isfinite(cfg.epsilon), "foce_order: epsilon must be >= 0");
  require(cfg.tie_tolerance >= 0.0, "foce_order: tie tolerance must be >= 0");

  std::vector<std::string> ids = gamma.node_ids;
  if (ids.empty()) {
    for (Index i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i + 1));
  }
  require(static_cast<Index>(ids.size()) == n, "foce_order: node id count mismatch");

  FoceOrdering out;
  out.objective = cfg.objective;
  if (out.objective == FoceObjective::Auto) {
    const auto spec = symmetric_eigen(g);
    const bool pd = spec.values(0) > kPdTolerance * spec.values.cwiseAbs().maxCoeff();
    out.objective = pd ? FoceObjective::MinVarianceLoss : FoceObjective::SpectralRadius;
  }

  std::vector<Index> alive(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) alive[static_cast<std::size_t>(i)] = i;
  double prev = foce_objective(g, alive, out.objective);
  out.initial_objective = prev;
  std::vector<double> trace;
  std::vector<double> gaps;

  while (alive.size() > 1) {
    const Index step = static_cast<Index>(out.removed.size());
    Matrix w = principal_submatrix(g, alive);
    w.diagonal().setZero();
    const Adjacency adj(std::move(w));
    Vector scores;
    try {
      scores = compute_centrality(adj, cfg.centrality_kind, cfg.centrality_params).scores;
    } catch (const Error& e) {
      scores = degree_centrality(adj).scores;
      out.fallback_steps.push_back(step);
      out.fallback_reasons.emplace_back(e.what());
    }
    const Pick pick = argmax_lowest(scores, cfg.tie_tolerance);
    const Index node = alive[static_cast<std::size_t>(pick.position)];
    alive.erase(alive.begin() + pick.position);
    out.removed.push_back(ids[static_cast<std::size_t>(node)]);
    out.removed_index.push_back(node);
    gaps.push_back(pick.gap);

    const double f = foce_objective(g, alive, out.objective);
    trace.push_back(f);
    const bool settled = std::abs(f - prev) <= cfg.epsilon;
    prev = f;
    if (settled) break;
  }

  out.stop_index = static_cast<Index>(out.removed.size());
  out.objective_trace = Eigen::Map<const Vector>(trace.data(), static_cast<Index>(trace.size()));
  out.score_gap = Eigen::Map<const Vector>(gaps.data(), static_cast<Index>(gaps.size()));
  for (Index v : alive) {
    out.selected_index.push_back(v);
    out.selected_set.push_back(ids[static_cast<std::size_t>(v)]);
  }
  return out;
}

bool oracle_property_check(const RiskMatrix& population, const FoceConfig& cfg,
                           const std::vector<RiskMatrix>& estimates) {
  const Index n = population.gamma.rows();
  for (const auto& e : estimates) {
    require(e.gamma.rows() == n && e.gamma.cols() == n,
            "oracle_property_check: estimate dimension does not match the population");
  }
  const FoceOrdering truth = foce_order(population, cfg);
  const auto prefix = static_cast<std::size_t>(truth.stop_index);
  for (const auto& e : estimates) {
    const FoceOrdering est = foce_order(e, cfg);
    if (est.removed_index.size() < prefix) return false;
    for (std::size_t k = 0; k < prefix; ++k) {
      if (est.removed_index[k] != truth.removed_index[k]) return false;
    }
  }
  return true;
}

}  // namespace tailrisk
