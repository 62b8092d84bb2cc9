#include "tailrisk/centrality.hpp"

#include "tailrisk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace tailrisk {

Adjacency::Adjacency(Matrix weights, std::vector<std::string> node_ids)
    : weights_(std::move(weights)), node_ids_(std::move(node_ids)) {
  require(weights_.rows() == weights_.cols(), "adjacency must be square");
  require(weights_.allFinite(), "adjacency contains non-finite weights");
  require(is_exactly_symmetric(weights_), "adjacency must be symmetric");
  for (Index i = 0; i < weights_.rows(); ++i) {
    require(weights_(i, i) == 0.0, "adjacency must have a zero diagonal");
  }
  if (node_ids_.empty()) {
    for (Index i = 0; i < weights_.rows(); ++i) node_ids_.push_back("n" + std::to_string(i + 1));
  }
  require(static_cast<Index>(node_ids_.size()) == weights_.rows(), "adjacency: node id count mismatch");
}

std::vector<Index> Adjacency::neighbors(Index i) const {
  std::vector<Index> out;
  for (Index j = 0; j < size(); ++j)
    if (has_edge(i, j)) out.push_back(j);
  return out;
}

Adjacency Adjacency::subgraph(const std::vector<Index>& nodes) const {
  std::vector<std::string> ids;
  for (Index v : nodes) ids.push_back(node_ids_[static_cast<std::size_t>(v)]);
  return Adjacency(principal_submatrix(weights_, nodes), std::move(ids));
}

Adjacency adjacency_from_risk(const RiskMatrix& gamma) {
  Matrix w = gamma.gamma;
  w.diagonal().setZero();
  return Adjacency(std::move(w), gamma.node_ids);
}

Spectrum spectral(const Matrix& a) {
  require(a.rows() == a.cols() && is_exactly_symmetric(a), "spectral: input must be symmetric");
  const auto es = symmetric_eigen(a);
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    const double ax = std::abs(es.values(x));
    const double ay = std::abs(es.values(y));
    if (ax != ay) return ax > ay;
    return es.values(x) > es.values(y);
  });
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    s.eigenvalues(k) = es.values(order[static_cast<std::size_t>(k)]);
    s.eigenvectors.col(k) = es.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return s;
}

Spectrum spectral(const Adjacency& adj) { return spectral(adj.weights()); }

double offdiagonal_quadratic_form(const Adjacency& adj, const Vector& z) {
  require(z.size() == adj.size(), "offdiagonal_quadratic_form: dimension mismatch");
  double s = 0.0;
  for (Index i = 0; i < adj.size(); ++i)
    for (Index j = 0; j < adj.size(); ++j)
      if (j != i) s += z(i) * z(j) * adj.weights()(i, j);
  return s;
}

std::string_view to_string(CentralityKind kind) noexcept {
  switch (kind) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::Eigenvector: return "eigenvector";
    case CentralityKind::Katz: return "katz";
    case CentralityKind::PageRank: return "pagerank";
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::Leverage: return "leverage";
  }
  return "unknown";
}

CentralityKind parse_centrality_kind(std::string_view name) {
  for (auto k : {CentralityKind::Degree, CentralityKind::Eigenvector, CentralityKind::Katz,
                 CentralityKind::PageRank, CentralityKind::Closeness, CentralityKind::Betweenness,
                 CentralityKind::Leverage}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorKind::InvalidArgument, "unknown centrality kind '" + std::string(name) + "'");
}

namespace {

// Weights the Perron-type methods operate on.
Matrix working_weights(const Adjacency& adj, const CentralityParams& params, const char* who) {
  if (!params.raw_weights) return adj.weights().cwiseAbs();
  if (adj.has_negative_weight()) {
    fail(ErrorKind::Domain, std::string(who) + ": raw weights contain negative entries");
  }
  return adj.weights();
}

std::vector<Index> component_of(const Adjacency& adj, Index start, std::vector<char>& seen) {
  std::vector<Index> comp{start};
  seen[static_cast<std::size_t>(start)] = 1;
  for (std::size_t h = 0; h < comp.size(); ++h) {
    for (Index j : adj.neighbors(comp[h])) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        comp.push_back(j);
      }
    }
  }
  return comp;
}

Vector weighted_degree(const Matrix& w) { return w.cwiseAbs().rowwise().sum(); }

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return symmetric_eigen(a).values.cwiseAbs().maxCoeff();
}

// Single-source shortest paths with edge length 1/|w|.
struct PathTree {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<std::vector<Index>> pred;
  std::vector<Index> order;  // nodes by nondecreasing distance
};

PathTree dijkstra(const Adjacency& adj, Index src) {
  const Index n = adj.size();
  const auto un = static_cast<std::size_t>(n);
  PathTree t;
  t.dist.assign(un, std::numeric_limits<double>::infinity());
  t.sigma.assign(un, 0.0);
  t.pred.assign(un, {});
  std::vector<char> done(un, 0);
  t.dist[static_cast<std::size_t>(src)] = 0.0;
  t.sigma[static_cast<std::size_t>(src)] = 1.0;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    const auto uv = static_cast<std::size_t>(v);
    if (done[uv]) continue;
    done[uv] = 1;
    t.order.push_back(v);
    for (Index w = 0; w < n; ++w) {
      if (!adj.has_edge(v, w)) continue;
      const auto uw = static_cast<std::size_t>(w);
      if (done[uw]) continue;
      const double nd = d + 1.0 / std::abs(adj.weights()(v, w));
      const double tol = 1e-12 * std::max(1.0, nd);
      if (nd < t.dist[uw] - tol) {
        t.dist[uw] = nd;
        t.sigma[uw] = t.sigma[uv];
        t.pred[uw] = {v};
        pq.emplace(nd, w);
      } else if (std::abs(nd - t.dist[uw]) <= tol) {
        t.sigma[uw] += t.sigma[uv];
        t.pred[uw].push_back(v);
      }
    }
  }
  return t;
}

}  // namespace

bool is_connected(const Adjacency& adj) {
  if (adj.size() <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(adj.size()), 0);
  return static_cast<Index>(component_of(adj, 0, seen).size()) == adj.size();
}

CentralityScores degree_centrality(const Adjacency& adj, const CentralityParams& params) {
  CentralityScores out;
  out.kind = CentralityKind::Degree;
  out.params = params;
  out.scores = working_weights(adj, params, "degree").rowwise().sum();
  return out;
}

CentralityScores eigenvector_centrality(const Adjacency& adj, const CentralityParams& params) {
  const Matrix a = working_weights(adj, params, "eigenvector");
  const Index n = adj.size();
  CentralityScores out;
  out.kind = CentralityKind::Eigenvector;
  out.params = params;
  if (n == 1) {
    out.scores = Vector::Ones(1);
    return out;
  }
  if (!is_connected(adj)) {
    fail(ErrorKind::Disconnected, "eigenvector centrality: graph is disconnected");
  }
  // Shifting by half the largest degree keeps the Perron root strictly
  // dominant on bipartite graphs without changing the eigenvector.
  const double shift = 0.5 * a.rowwise().sum().maxCoeff();
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  constexpr int kMaxIter = 10000;
  for (int it = 1; it <= kMaxIter; ++it) {
    Vector next = a * v + shift * v;
    next /= next.norm();
    v = next;
    const Vector av = a * v;
    const double lambda = v.dot(av);
    out.iterations = it;
    if ((av - lambda * v).norm() <= 1e-10 * std::max(1.0, std::abs(lambda))) break;
    if (it == kMaxIter) {
      fail(ErrorKind::Divergence, "eigenvector centrality: power iteration did not converge");
    }
  }
  if (v.minCoeff() < -1e-9) {
    fail(ErrorKind::Domain, "eigenvector centrality: dominant eigenvector is sign-indefinite");
  }
  out.scores = v.cwiseMax(0.0);
  out.scores /= out.scores.norm();
  return out;
}

CentralityScores katz(const Adjacency& adj, const CentralityParams& params) {
  const Matrix a = working_weights(adj, params, "katz");
  const Index n = adj.size();
  const double lambda1 = spectral_radius(a);
  const double alpha = params.alpha.value_or(lambda1 > 0.0 ? 0.5 / lambda1 : 0.5);
  require(alpha > 0.0, "katz: alpha must be positive");
  if (alpha * lambda1 >= 1.0 - 1e-12) {
    fail(ErrorKind::Divergence, "katz: alpha = " + std::to_string(alpha) +
                                    " must be below 1/lambda_1 = " + std::to_string(1.0 / lambda1));
  }
  CentralityScores out;
  out.kind = CentralityKind::Katz;
  out.params = params;
  out.params.alpha = alpha;
  const Matrix m = Matrix::Identity(n, n) - alpha * a.transpose();
  out.scores = m.partialPivLu().solve(Vector::Ones(n));
  return out;
}

CentralityScores pagerank(const Adjacency& adj, const CentralityParams& params) {
  const Matrix a = working_weights(adj, params, "pagerank");
  const Index n = adj.size();
  const double alpha = params.alpha.value_or(0.85);
  const double beta = params.beta.value_or(1.0 - alpha);
  require(alpha > 0.0 && alpha < 1.0, "pagerank: alpha must lie in (0,1)");
  const Vector deg = a.rowwise().sum();
  for (Index i = 0; i < n; ++i) {
    if (!(deg(i) > 0.0)) {
      fail(ErrorKind::Disconnected, "pagerank: node " + adj.node_ids()[static_cast<std::size_t>(i)] +
                                        " is isolated");
    }
  }
  // v = alpha * A' D^{-1} v + beta * 1
  const Matrix transition = a.transpose() * deg.cwiseInverse().asDiagonal();
  Vector v = Vector::Ones(n);
  CentralityScores out;
  out.kind = CentralityKind::PageRank;
  out.params = params;
  out.params.alpha = alpha;
  out.params.beta = beta;
  for (int it = 1; it <= 100000; ++it) {
    Vector next = alpha * (transition * v) + Vector::Constant(n, beta);
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    out.iterations = it;
    if (change <= 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff())) break;
  }
  out.scores = v;
  return out;
}

CentralityScores closeness(const Adjacency& adj, const CentralityParams& params) {
  if (params.raw_weights && adj.has_negative_weight()) {
    fail(ErrorKind::InvalidArgument, "closeness: raw weights contain negative entries");
  }
  const Index n = adj.size();
  CentralityScores out;
  out.kind = CentralityKind::Closeness;
  out.params = params;
  out.scores = Vector::Zero(n);
  for (Index s = 0; s < n; ++s) {
    const PathTree t = dijkstra(adj, s);
    double total = 0.0;
    Index reached = 0;
    for (Index j = 0; j < n; ++j) {
      const double d = t.dist[static_cast<std::size_t>(j)];
      if (j != s && std::isfinite(d)) {
        total += d;
        ++reached;
      }
    }
    if (reached + 1 < n) out.disconnected = true;
    out.scores(s) = reached > 0 ? static_cast<double>(reached) / total : 0.0;
  }
  return out;
}

CentralityScores betweenness(const Adjacency& adj, const CentralityParams& params) {
  if (params.raw_weights && adj.has_negative_weight()) {
    fail(ErrorKind::InvalidArgument, "betweenness: raw weights contain negative entries");
  }
  const Index n = adj.size();
  CentralityScores out;
  out.kind = CentralityKind::Betweenness;
  out.params = params;
  out.scores = Vector::Zero(n);
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    const PathTree t = dijkstra(adj, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
      const auto w = static_cast<std::size_t>(*it);
      for (Index v : t.pred[w]) {
        const auto uv = static_cast<std::size_t>(v);
        delta[uv] += t.sigma[uv] / t.sigma[w] * (1.0 + delta[w]);
      }
      if (*it != s) out.scores(*it) += delta[w];
    }
  }
  // Each unordered pair was accumulated from both endpoints.
  out.scores *= 0.5;
  return out;
}

CentralityScores leverage(const Adjacency& adj) {
  const Index n = adj.size();
  const Vector deg = weighted_degree(adj.weights());
  CentralityScores out;
  out.kind = CentralityKind::Leverage;
  out.scores = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (!(deg(i) > 0.0)) {
      fail(ErrorKind::Disconnected, "leverage: node " + adj.node_ids()[static_cast<std::size_t>(i)] +
                                        " is isolated");
    }
    double s = 0.0;
    for (Index j : adj.neighbors(i)) s += (deg(i) - deg(j)) / (deg(i) + deg(j));
    out.scores(i) = s / deg(i);
  }
  return out;
}

CentralityScores compute_centrality(const Adjacency& adj, CentralityKind kind,
                                    const CentralityParams& params) {
  switch (kind) {
    case CentralityKind::Degree: return degree_centrality(adj, params);
    case CentralityKind::Eigenvector: return eigenvector_centrality(adj, params);
    case CentralityKind::Katz: return katz(adj, params);
    case CentralityKind::PageRank: return pagerank(adj, params);
    case CentralityKind::Closeness: return closeness(adj, params);
    case CentralityKind::Betweenness: return betweenness(adj, params);
    case CentralityKind::Leverage: return leverage(adj);
  }
  fail(ErrorKind::InvalidArgument, "unknown centrality kind");
}

std::vector<Index> centrality_ranks(const Vector& scores) {
  const Index n = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores(a) > scores(b); });
  std::vector<Index> rank(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
  return rank;
}

// ---------------------------------------------------------------------------
// Ordinal centrality

Preorder::Preorder(Index n, bool fill)
    : n_(n), rel_(static_cast<std::size_t>(n * n), fill ? 1 : 0) {}

Preorder Preorder::identity(Index n) {
  Preorder p(n);
  for (Index i = 0; i < n; ++i) p.set(i, i);
  return p;
}

bool Preorder::is_reflexive() const noexcept {
  for (Index i = 0; i < n_; ++i)
    if (!(*this)(i, i)) return false;
  return true;
}

bool Preorder::is_transitive() const noexcept {
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j)
      if ((*this)(i, j))
        for (Index k = 0; k < n_; ++k)
          if ((*this)(j, k) && !(*this)(i, k)) return false;
  return true;
}

bool Preorder::close_transitively() noexcept {
  bool added = false;
  for (Index k = 0; k < n_; ++k)
    for (Index i = 0; i < n_; ++i)
      if ((*this)(i, k))
        for (Index j = 0; j < n_; ++j)
          if ((*this)(k, j) && !(*this)(i, j)) {
            set(i, j);
            added = true;
          }
  return added;
}

namespace {

// Kuhn's augmenting-path matching of sp (left) into s (right).
bool injects(const Preorder& order, const std::vector<Index>& s, const std::vector<Index>& sp) {
  if (sp.size() > s.size()) return false;
  std::vector<std::ptrdiff_t> owner(s.size(), -1);
  std::vector<char> visited;
  auto augment = [&](auto&& self, std::size_t left) -> bool {
    for (std::size_t r = 0; r < s.size(); ++r) {
      if (visited[r] || !order(s[r], sp[left])) continue;
      visited[r] = 1;
      if (owner[r] < 0 || self(self, static_cast<std::size_t>(owner[r]))) {
        owner[r] = static_cast<std::ptrdiff_t>(left);
        return true;
      }
    }
    return false;
  };
  for (std::size_t left = 0; left < sp.size(); ++left) {
    visited.assign(s.size(), 0);
    if (!augment(augment, left)) return false;
  }
  return true;
}

// Smallest relation containing `r` that is transitive and contains (i, j)
// whenever N(i) dominates N(j).
void monotone_closure(const std::vector<std::vector<Index>>& nbr, Preorder& r) {
  const Index n = r.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (!r(i, j) && injects(r, nbr[static_cast<std::size_t>(i)], nbr[static_cast<std::size_t>(j)])) {
          r.set(i, j);
          changed = true;
        }
      }
    }
    if (r.close_transitively()) changed = true;
  }
}

}  // namespace

bool dominance(const Adjacency& adj, const Preorder& order, const std::vector<Index>& s,
               const std::vector<Index>& sp) {
  require(order.size() == adj.size(), "dominance: preorder size does not match graph");
  for (Index v : s) require(v >= 0 && v < adj.size(), "dominance: node out of range");
  for (Index v : sp) require(v >= 0 && v < adj.size(), "dominance: node out of range");
  return injects(order, s, sp);
}

Preorder strong_centrality(const Adjacency& adj) {
  const Index n = adj.size();
  if (n > kStrongCentralityMaxNodes) {
    fail(ErrorKind::UnsupportedSize, "strong_centrality supports at most " +
                                         std::to_string(kStrongCentralityMaxNodes) +
                                         " nodes, got " + std::to_string(n));
  }
  std::vector<std::vector<Index>> nbr;
  for (Index i = 0; i < n; ++i) nbr.push_back(adj.neighbors(i));

  Preorder r = Preorder::identity(n);
  monotone_closure(nbr, r);
  // Every complete ordinal centrality has either j >= i or i > j. If adding
  // j >= i forces i >= j, then i >= j holds in all of them.
  bool changed = true;
  while (changed) {
    changed = false;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (r(i, j)) continue;
        Preorder trial = r;
        trial.set(j, i);
        monotone_closure(nbr, trial);
        if (trial(i, j)) {
          r.set(i, j);
          monotone_closure(nbr, r);
          changed = true;
        }
      }
    }
  }
  return r;
}

double rank_statistic(const Vector& c, const Vector& d, const std::vector<Index>& ranks) {
  const Index k = c.size();
  require(k >= 2, "rank_statistic: need at least two entries");
  require(d.size() == k && static_cast<Index>(ranks.size()) == k,
          "rank_statistic: length mismatch");
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (Index r : ranks) {
    require(r >= 1 && r <= k && !seen[static_cast<std::size_t>(r - 1)],
            "rank_statistic: ranks must be a permutation of 1..k");
    seen[static_cast<std::size_t>(r - 1)] = 1;
  }
  const Vector cc = c.array() - c.mean();
  const Vector dc = d.array() - d.mean();
  const double css = cc.squaredNorm();
  const double dss = dc.squaredNorm();
  if (!(dss > 0.0)) fail(ErrorKind::DegenerateScores, "rank_statistic: scores d are constant");
  if (!(css > 0.0)) fail(ErrorKind::DegenerateScores, "rank_statistic: coefficients c are constant");
  const Vector cn = cc / std::sqrt(css);
  const Vector dn = dc / std::sqrt(dss / static_cast<double>(k - 1));
  double s = 0.0;
  for (Index i = 0; i < k; ++i) s += cn(i) * dn(ranks[static_cast<std::size_t>(i)] - 1);
  return s;
}

}  // namespace tailrisk
