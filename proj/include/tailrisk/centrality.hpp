#pragma once

#include "tailrisk/linalg.hpp"
#include "tailrisk/tail_risk.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

/// Weighted undirected graph: symmetric weights with a zero diagonal.
class Adjacency {
 public:
  explicit Adjacency(Matrix weights, std::vector<std::string> node_ids = {});

  Index size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }

  bool has_edge(Index i, Index j) const noexcept { return i != j && weights_(i, j) != 0.0; }
  std::vector<Index> neighbors(Index i) const;
  bool has_negative_weight() const noexcept { return (weights_.array() < 0.0).any(); }

  /// Induced subgraph on the listed nodes, in order.
  Adjacency subgraph(const std::vector<Index>& nodes) const;

 private:
  Matrix weights_;
  std::vector<std::string> node_ids_;
};

/// Zeroes the diagonal of the risk matrix.
Adjacency adjacency_from_risk(const RiskMatrix& gamma);

struct Spectrum {
  Vector eigenvalues;   // sorted by decreasing magnitude
  Matrix eigenvectors;  // orthonormal columns aligned with eigenvalues
};

Spectrum spectral(const Matrix& symmetric);
Spectrum spectral(const Adjacency& adj);

/// sum_i sum_{j != i} z_i z_j w_ij: the eigenvalue written through the
/// off-diagonal weights and a unit eigenvector.
double offdiagonal_quadratic_form(const Adjacency& adj, const Vector& z);

enum class CentralityKind { Degree, Eigenvector, Katz, PageRank, Closeness, Betweenness, Leverage };

std::string_view to_string(CentralityKind kind) noexcept;
CentralityKind parse_centrality_kind(std::string_view name);

struct CentralityParams {
  /// Katz: attenuation (default 0.5 / lambda_1). PageRank: damping (default 0.85).
  std::optional<double> alpha;
  /// PageRank teleport term (default 1 - alpha).
  std::optional<double> beta;
  /// Use signed weights as-is; fails when a method needs nonnegative weights.
  bool raw_weights = false;
};

struct CentralityScores {
  CentralityKind kind = CentralityKind::Degree;
  Vector scores;
  CentralityParams params;
  /// Closeness on a disconnected graph: scores computed per component.
  bool disconnected = false;
  int iterations = 0;
};

CentralityScores degree_centrality(const Adjacency& adj, const CentralityParams& params = {});
CentralityScores eigenvector_centrality(const Adjacency& adj, const CentralityParams& params = {});
CentralityScores katz(const Adjacency& adj, const CentralityParams& params = {});
CentralityScores pagerank(const Adjacency& adj, const CentralityParams& params = {});
/// Path lengths are 1/|w|. With raw_weights set, negative weights are rejected.
CentralityScores closeness(const Adjacency& adj, const CentralityParams& params = {});
CentralityScores betweenness(const Adjacency& adj, const CentralityParams& params = {});
CentralityScores leverage(const Adjacency& adj);

CentralityScores compute_centrality(const Adjacency& adj, CentralityKind kind,
                                    const CentralityParams& params = {});

/// 1-based ranks, 1 = most central; ties go to the lower node index.
std::vector<Index> centrality_ranks(const Vector& scores);

bool is_connected(const Adjacency& adj);

/// Binary relation on nodes; (i, j) true means i is ranked at least as high as j.
class Preorder {
 public:
  explicit Preorder(Index n, bool fill = false);
  static Preorder identity(Index n);

  Index size() const noexcept { return n_; }
  bool operator()(Index i, Index j) const noexcept { return rel_[idx(i, j)] != 0; }
  void set(Index i, Index j, bool v = true) noexcept { rel_[idx(i, j)] = v ? 1 : 0; }

  bool is_reflexive() const noexcept;
  bool is_transitive() const noexcept;
  /// Returns true when the closure added any pair.
  bool close_transitively() noexcept;

  friend bool operator==(const Preorder&, const Preorder&) = default;

 private:
  std::size_t idx(Index i, Index j) const noexcept {
    return static_cast<std::size_t>(i * n_ + j);
  }
  Index n_;
  std::vector<char> rel_;
};

/// True iff an injection f: sp -> s exists with f(i) >= i under `order`.
bool dominance(const Adjacency& adj, const Preorder& order, const std::vector<Index>& s,
               const std::vector<Index>& sp);

inline constexpr Index kStrongCentralityMaxNodes = 12;

/// Pairs ranked i >= j by every complete ordinal centrality of the graph's
/// support (edges with nonzero weight).
Preorder strong_centrality(const Adjacency& adj);

/// Linear permutation statistic sum_i (c_i - mean c) d(R_i) with c scaled to
/// unit sum of squares and d to unit sample variance. ranks are 1-based.
double rank_statistic(const Vector& c, const Vector& d, const std::vector<Index>& ranks);

}  // namespace tailrisk
