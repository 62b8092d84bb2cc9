// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "graph_oracles.hpp"
#include "oracles.hpp"

#include "tailrisk/centrality.hpp"
#include "tailrisk/error.hpp"
#include "tailrisk/foce.hpp"
#include "tailrisk/io.hpp"
#include "tailrisk/pipeline.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/precision.hpp"
#include "tailrisk/quantile.hpp"
#include "tailrisk/simulate.hpp"
#include "tailrisk/tail_risk.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace tailrisk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const double kTaus[] = {0.05, 0.25, 0.5, 0.75, 0.95};

// 1
Outcome quantile_lp_oracle() {
  CounterRng rng(2024);
  double worst = 0.0;
  int bad = 0;
  for (int prob = 0; prob < 200; ++prob) {
    const Index k = 1 + prob % 3;
    const Index n = std::max<Index>(k + 2, 5 + static_cast<Index>(rng.uniform() * 26));
    const double tau = kTaus[prob % 5];
    Matrix x(n, k);
    x.col(0).setOnes();
    for (Index c = 1; c < k; ++c)
      for (Index t = 0; t < n; ++t) x(t, c) = rng.normal();
    Vector y(n);
    for (Index t = 0; t < n; ++t) y(t) = 0.5 + x.row(t).sum() + rng.normal();
    const QuantileFit fit = fit_quantile(Design(x), y, QuantileLevel(tau));
    const double gap = std::abs(fit.objective - oracle::quantile_lp_optimum(x, y, tau));
    worst = std::max(worst, gap);
    bad += gap > 1e-6;
  }
  return {bad == 0, fmt("max |objective - LP optimum| = %.3g over 200 problems, %d above 1e-6", worst, bad)};
}

// 2
Outcome empirical_quantile_identity() {
  CounterRng rng(77);
  double worst = 0.0;
  int bad = 0;
  int count = 0;
  for (Index n = 1; n <= 50; ++n) {
    for (double tau : kTaus) {
      Vector y(n);
      for (Index t = 0; t < n; ++t) y(t) = rng.normal() * 2.0 + (t % 3 == 0 ? 1.0 : 0.0);
      const QuantileFit fit = fit_quantile(Design(Matrix::Ones(n, 1)), y, QuantileLevel(tau));
      const double ref = oracle::empirical_quantile_objective(y, tau);
      const double gap = std::abs(fit.objective - ref);
      worst = std::max(worst, gap);
      bad += gap > 1e-10;
      ++count;
    }
  }
  return {bad == 0, fmt("max objective gap = %.3g over %d intercept-only fits (n = 1..50)", worst, count)};
}

// 3
Outcome risk_matrix_structure() {
  CounterRng rng(303);
  int asym = 0;
  int diag = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 2 + rep % 9;
    TailForecasts f;
    f.var_plus.resize(n);
    for (Index i = 0; i < n; ++i) f.var_plus(i) = 0.01 + 5.0 * rng.uniform();
    f.delta_covar = oracle::gaussian_matrix(rng, n, n);
    f.delta_covar.diagonal().setZero();
    f.covar = f.delta_covar;
    for (Index i = 0; i < n; ++i) f.node_ids.push_back("n" + std::to_string(i));
    const RiskMatrix r = build_risk_matrix(f);
    asym += !(r.gamma == r.gamma.transpose());
    diag += !(r.gamma.diagonal() == f.var_plus);
  }
  TailForecasts ex;
  ex.var_plus = Vector(2);
  ex.var_plus << 1.0, 4.0;
  ex.delta_covar = Matrix::Zero(2, 2);
  ex.delta_covar(0, 1) = 0.3;
  ex.delta_covar(1, 0) = 0.1;
  ex.covar = ex.delta_covar;
  ex.node_ids = {"a", "b"};
  Matrix expect(2, 2);
  expect << 1.0, 0.4, 0.4, 4.0;
  const bool worked = build_risk_matrix(ex).gamma == expect;
  return {asym == 0 && diag == 0 && worked,
          fmt("%d asymmetric, %d diagonal mismatches in 100 cases; worked example %s", asym, diag,
              worked ? "exact" : "differs")};
}

// 4
Outcome covar_independence() {
  std::vector<double> delta;
  std::vector<double> var;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PanelData p = simulate_return_panel(3, 1, 2000, Matrix::Identity(3, 3), 4000 + seed);
    const TailForecasts f = forecast_all(p, QuantileLevel(0.05));
    for (Index j = 0; j < 3; ++j) {
      var.push_back(f.var_plus(j));
      for (Index i = 0; i < 3; ++i)
        if (i != j) delta.push_back(std::abs(f.delta_covar(j, i)));
    }
  }
  const double md = median(delta);
  const double mv = median(var);
  return {md < 0.1 * mv, fmt("median |dCoVaR| = %.4f, 0.1 * median VaR = %.4f (50 seeds)", md, 0.1 * mv)};
}

// 5
Outcome var_error_normality() {
  const double tau = 0.05;
  const double z = boost::math::quantile(boost::math::normal(), tau);
  const double a = 0.1;
  const double b = 0.5;
  const double x0 = 1.0;
  std::vector<double> err;
  for (std::uint64_t rep = 0; rep < 500; ++rep) {
    PanelSimSpec s;
    s.assets = 2;
    s.state_dim = 1;
    s.periods = 2001;  // 2000 regression rows
    s.intercept = Vector::Constant(2, a);
    s.state_loading = Matrix::Constant(2, 1, b);
    s.state_ar = 0.5;
    s.seed = 9000 + rep;
    const PanelData p = simulate_return_panel(s);
    const VarFit v = fit_var_node(p, 0, QuantileLevel(tau));
    const Vector& c = v.fit.coefficients;
    err.push_back(c(0) + c(1) * x0 - (a + b * x0 + z));
  }
  const double n = static_cast<double>(err.size());
  const double mean = std::accumulate(err.begin(), err.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double e : err) {
    const double d = e - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double exkurt = m4 / (m2 * m2) - 3.0;
  return {std::abs(skew) < 0.2 && std::abs(exkurt) < 0.5,
          fmt("skewness %.3f, excess kurtosis %.3f, mean error %.4f, sd %.4f (500 reps, n = 2000, tau = 0.05)",
              skew, exkurt, mean, std::sqrt(m2))};
}

// 6
Outcome decomposition_identities() {
  CounterRng rng(606);
  double worst_add = 0.0;
  double worst_dod = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 2 + rep % 9;
    const RiskMatrix r = make_risk_matrix(oracle::random_spd(rng, n, 0.2), 0.05);
    const Vector w = oracle::gaussian_matrix(rng, n, 1).col(0);
    const LossDecomposition d = loss_decomposition(r.gamma, w);
    const double q = quadratic_loss(r.gamma, w);
    worst_add = std::max(worst_add, std::abs(d.total() - q) / std::max(1.0, std::abs(q)));
    const DodDecomposition dod = decompose_dod(r);
    const Matrix rebuilt = dod.diag_sqrt.asDiagonal() * dod.core * dod.diag_sqrt.asDiagonal();
    worst_dod = std::max(worst_dod, (rebuilt - r.gamma).cwiseAbs().maxCoeff() / std::max(1.0, r.gamma.cwiseAbs().maxCoeff()));
  }
  return {worst_add <= 1e-12 && worst_dod <= 1e-12,
          fmt("max additivity error %.3g, max D*Omega*D error %.3g (100 PD matrices)", worst_add, worst_dod)};
}

// 7
Outcome min_variance_optimality() {
  CounterRng rng(707);
  int beaten = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 2 + rep % 7;
    const Matrix g = oracle::random_spd(rng, n, 0.1);
    const PortfolioWeights w = min_variance_weights(g);
    const double q = quadratic_loss(g, w.weights);
    for (int s = 0; s < 1000; ++s) {
      Vector v(n);
      for (Index i = 0; i < n; ++i) v(i) = -std::log(rng.uniform());
      v /= v.sum();
      const double qs = quadratic_loss(g, v);
      worst_margin = std::min(worst_margin, qs - q);
      beaten += qs < q;
    }
  }
  bool equal = true;
  for (Index n = 1; n <= 12; ++n) {
    const PortfolioWeights w = min_variance_weights(Matrix::Identity(n, n));
    for (Index i = 0; i < n; ++i) equal = equal && w.weights(i) == 1.0 / static_cast<double>(n);
  }
  return {beaten == 0 && equal, fmt("%d of 50000 simplex portfolios beat w* (min margin %.3g); identity weights %s",
                                     beaten, worst_margin, equal ? "exactly 1/N" : "not equal")};
}

// 8
Outcome centrality_oracles() {
  int graphs = 0;
  double worst_b = 0.0;
  double worst_c = 0.0;
  for (Index n = 2; n <= 6; ++n) {
    const auto pairs = oracle::vertex_pairs(n);
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      const Matrix w = oracle::graph_from_mask(n, mask);
      if (!oracle::connected(w)) continue;
      ++graphs;
      const Adjacency adj(w);
      worst_b = std::max(worst_b, (betweenness(adj).scores - oracle::betweenness_oracle(w)).cwiseAbs().maxCoeff());
      worst_c = std::max(worst_c, (closeness(adj).scores - oracle::closeness_oracle(w)).cwiseAbs().maxCoeff());
    }
  }
  CounterRng rng(808);
  double worst_wb = 0.0;
  double worst_wc = 0.0;
  double worst_k = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 3 + rep % 6;
    const Matrix w = oracle::random_weighted_graph(rng, n, 0.4, true);
    const Adjacency adj(w);
    worst_wb = std::max(worst_wb, (betweenness(adj).scores - oracle::betweenness_oracle(w)).cwiseAbs().maxCoeff());
    worst_wc = std::max(worst_wc, (closeness(adj).scores - oracle::closeness_oracle(w)).cwiseAbs().maxCoeff());
    const CentralityScores k = katz(adj);
    worst_k = std::max(worst_k, (k.scores - oracle::katz_neumann(w.cwiseAbs(), *k.params.alpha)).cwiseAbs().maxCoeff());
  }
  const bool ok = worst_b <= 1e-10 && worst_c <= 1e-10 && worst_wb <= 1e-10 && worst_wc <= 1e-10 && worst_k <= 1e-8;
  return {ok, fmt("%d labelled connected graphs N<=6: betweenness err %.2g, closeness err %.2g; "
                  "50 weighted N<=8: %.2g / %.2g; Katz vs Neumann %.2g",
                  graphs, worst_b, worst_c, worst_wb, worst_wc, worst_k)};
}

// 9
Outcome strong_centrality_oracle() {
  int graphs = 0;
  int mismatches = 0;
  for (Index n = 1; n <= 5; ++n) {
    const auto pairs = oracle::vertex_pairs(n);
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      const Matrix w = oracle::graph_from_mask(n, mask);
      if (n > 1 && !oracle::connected(w)) continue;
      ++graphs;
      const Preorder r = strong_centrality(Adjacency(w));
      const auto ref = oracle::ordinal_centrality_intersection(w);
      bool same = true;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) same = same && r(i, j) == (ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0);
      mismatches += !same;
    }
  }
  bool patterns = true;
  for (Index leaves = 2; leaves <= 8; ++leaves) {
    Matrix s = Matrix::Zero(leaves + 1, leaves + 1);
    for (Index i = 1; i <= leaves; ++i) s(0, i) = s(i, 0) = 1.0;
    const Preorder r = strong_centrality(Adjacency(s));
    for (Index i = 1; i <= leaves; ++i) {
      patterns = patterns && r(0, i) && !r(i, 0);
      for (Index j = 1; j <= leaves; ++j) patterns = patterns && r(i, j);
    }
    Matrix k = Matrix::Ones(leaves + 1, leaves + 1);
    k.diagonal().setZero();
    patterns = patterns && strong_centrality(Adjacency(k)) == Preorder(leaves + 1, true);
  }
  return {mismatches == 0 && patterns,
          fmt("%d of %d labelled connected graphs N<=5 differ from the intersection oracle; star/complete patterns %s",
              mismatches, graphs, patterns ? "hold" : "broken")};
}

// 10
Outcome foce_oracle() {
  CounterRng rng(1010);
  int order_mismatch = 0;
  int nondeterministic = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 2 + rep % 7;
    const RiskMatrix g = make_risk_matrix(oracle::random_spd(rng, n, 0.3), 0.05);
    FoceConfig cfg;
    cfg.epsilon = 0.0;
    const FoceOrdering o = foce_order(g, cfg);
    order_mismatch += o.removed_index != oracle::foce_brute_force_order(g.gamma, oracle::BruteKind::Eigenvector);
    nondeterministic += foce_order(g, cfg).removed_index != o.removed_index;
  }

  int sub_gap_false = 0;
  int beyond_gap_true = 0;
  int beyond_cases = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 4 + rep % 5;
    const RiskMatrix pop = make_risk_matrix(oracle::random_spd(rng, n, 0.3), 0.05);
    FoceConfig cfg;
    cfg.centrality_kind = CentralityKind::Degree;
    cfg.epsilon = 0.0;
    const FoceOrdering truth = foce_order(pop, cfg);
    const double gap = truth.score_gap.head(truth.stop_index - 1).minCoeff();
    const double delta = 0.99 * gap / (2.0 * static_cast<double>(n - 1));
    std::vector<RiskMatrix> noisy;
    for (int e = 0; e < 20; ++e) {
      Matrix m = pop.gamma;
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = m(i, j) + delta * (2.0 * rng.uniform() - 1.0);
      noisy.push_back(make_risk_matrix(m, 0.05));
    }
    sub_gap_false += !oracle_property_check(pop, cfg, noisy);

    if (truth.score_gap(0) <= 1e-6) continue;
    ++beyond_cases;
    const Index a = truth.removed_index[0];
    Vector deg = pop.gamma.cwiseAbs().rowwise().sum() - pop.gamma.diagonal().cwiseAbs();
    deg(a) = -1.0;
    Index b = 0;
    deg.maxCoeff(&b);
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::swap(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
    const RiskMatrix swapped = make_risk_matrix(oracle::permute_graph(pop.gamma, perm), 0.05);
    beyond_gap_true += oracle_property_check(pop, cfg, {swapped});
  }
  const bool ok = order_mismatch == 0 && nondeterministic == 0 && sub_gap_false == 0 && beyond_gap_true == 0 && beyond_cases > 0;
  return {ok, fmt("%d/50 orderings differ from brute force, %d nondeterministic; sub-gap check false in %d/20; "
                  "beyond-gap swap check true in %d/%d",
                  order_mismatch, nondeterministic, sub_gap_false, beyond_gap_true, beyond_cases)};
}

Matrix ar1_covariance(Index p, double rho) {
  Matrix s(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) s(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return s;
}

Matrix ar1_precision(Index p, double rho) {
  Matrix o = Matrix::Zero(p, p);
  const double c = 1.0 / (1.0 - rho * rho);
  for (Index i = 0; i < p; ++i) {
    o(i, i) = c * ((i == 0 || i == p - 1) ? 1.0 : 1.0 + rho * rho);
    if (i + 1 < p) o(i, i + 1) = o(i + 1, i) = -c * rho;
  }
  return o;
}

Matrix gaussian_rows(CounterRng& rng, Index n, const Matrix& cov) {
  const Matrix l = cov.llt().matrixL();
  return oracle::gaussian_matrix(rng, n, cov.rows()) * l.transpose();
}

// 11
Outcome precision_recovery() {
  const Index p = 10;
  const Matrix omega = ar1_precision(p, 0.5);
  std::vector<double> e500, e2000;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(11000 + seed);
    e500.push_back((estimate_precision(gaussian_rows(rng, 500, ar1_covariance(p, 0.5))).omega_hat - omega).cwiseAbs().maxCoeff());
    e2000.push_back((estimate_precision(gaussian_rows(rng, 2000, ar1_covariance(p, 0.5))).omega_hat - omega).cwiseAbs().maxCoeff());
  }
  const double m500 = median(e500);
  const double m2000 = median(e2000);

  const Index q = 3;
  const Index n = 2000;
  const Matrix omega3 = ar1_precision(q, 0.5);
  double worst_pop = 0.0;
  double worst_sample = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(12000 + seed);
    const Matrix y = gaussian_rows(rng, n, ar1_covariance(q, 0.5));
    const PrecisionEstimate est = estimate_precision(y, Vector::Zero(q));
    const Matrix yc = y.rowwise() - y.colwise().mean();
    const Matrix s_inv = oracle::gauss_jordan_inverse(yc.transpose() * yc / static_cast<double>(n));
    worst_sample = std::max(worst_sample, (est.omega_hat - s_inv).cwiseAbs().maxCoeff());
    worst_pop = std::max(worst_pop, (est.omega_hat - omega3).cwiseAbs().maxCoeff());
  }
  const double bound = 10.0 / std::sqrt(static_cast<double>(n));
  const bool ok = m2000 < m500 && worst_pop <= bound && worst_sample <= 1e-8;
  return {ok, fmt("median max-entry error n=500: %.4f, n=2000: %.4f; lambda=0, p=3: max error vs population %.4f "
                  "(bound %.4f), vs sample inverse %.2g",
                  m500, m2000, worst_pop, bound, worst_sample)};
}

// 12
Outcome dgp_paper_scale() {
  SimSpec spec;
  spec.seed = 12;
  const auto t0 = std::chrono::steady_clock::now();
  const DgpSample d = simulate_dgp(spec);
  const double sim_secs = elapsed(t0);

  const double n = static_cast<double>(spec.n);
  const Matrix xc = d.x.rowwise() - d.x.colwise().mean();
  const Matrix cov = xc.transpose() * xc / (n - 1.0);
  const double dev = (cov - toeplitz_decay(spec.p, 0.5)).cwiseAbs().maxCoeff();
  const double bound = 3.0 / std::sqrt(n);
  Index outside = 0;
  for (Index i = 0; i < spec.p; ++i)
    for (Index j = i; j < spec.p; ++j) outside += std::abs(cov(i, j) - std::pow(0.5, static_cast<double>(j - i))) > bound;

  const fs::path dir = fs::temp_directory_path() / "tailrisk_acceptance_dgp";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto dates = consecutive_dates("2010-01-01", spec.n);
  DatedTable r;
  r.dates = dates;
  r.values = d.y.leftCols(10);
  for (Index j = 0; j < 10; ++j) r.names.push_back("Y" + std::to_string(j + 1));
  DatedTable s;
  s.dates = dates;
  s.values = d.x.leftCols(2);
  s.names = {"X1", "X2"};
  write_dated_csv(dir / "returns.csv", r);
  write_dated_csv(dir / "state.csv", s);
  RunConfig cfg;
  cfg.mode = RunMode::Estimate;
  cfg.returns_path = dir / "returns.csv";
  cfg.state_path = dir / "state.csv";
  cfg.out_dir = dir / "out";
  const auto t1 = std::chrono::steady_clock::now();
  const RunResult res = run_pipeline(cfg);
  const double pipe_secs = elapsed(t1);
  fs::remove_all(dir);

  const bool ok = sim_secs < 10.0 && dev <= bound && res.exit_code == 0 && pipe_secs < 120.0;
  return {ok, fmt("simulate %.2fs; max |S_ij - 0.5^|i-j|| = %.3f vs bound 3/sqrt(n) = %.3f (%ld of 5050 entries outside); "
                  "N=10 estimate exit %d in %.2fs%s%s",
                  sim_secs, dev, bound, static_cast<long>(outside), res.exit_code, pipe_secs,
                  res.exit_code ? ": " : "", res.message.c_str())};
}

// 13
Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "tailrisk_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int compared = 0;
  int differ = 0;
  std::string failure;
  auto run_twice = [&](RunConfig cfg) {
    for (const char* tag : {"a", "b"}) {
      RunConfig c = cfg;
      c.out_dir = dir / (std::string(to_string(cfg.mode)) + "_" + tag);
      const RunResult r = run_pipeline(c);
      if (r.exit_code != 0) failure += std::string(to_string(cfg.mode)) + ": " + r.message + "; ";
    }
    const fs::path a = dir / (std::string(to_string(cfg.mode)) + "_a");
    const fs::path b = dir / (std::string(to_string(cfg.mode)) + "_b");
    for (const auto& e : fs::directory_iterator(a)) {
      const auto name = e.path().filename();
      if (name == "run_manifest.json") continue;  // echoes out_dir
      ++compared;
      differ += read_text(a / name) != read_text(b / name);
    }
  };
  RunConfig sim;
  sim.mode = RunMode::Simulate;
  sim.seed = 1313;
  sim.simulate.assets = 6;
  sim.simulate.periods = 400;
  run_twice(sim);
  const fs::path data = dir / "simulate_a";
  for (RunMode m : {RunMode::Estimate, RunMode::Rolling, RunMode::Foce, RunMode::Precision}) {
    RunConfig c;
    c.mode = m;
    c.seed = 1313;
    c.returns_path = data / "returns.csv";
    c.state_path = data / "state.csv";
    c.window = m == RunMode::Rolling ? 200 : 0;
    c.step = 100;
    run_twice(c);
  }
  fs::remove_all(dir);
  return {failure.empty() && differ == 0 && compared > 0,
          fmt("%d artifact files compared across paired runs, %d differ%s%s", compared, differ,
              failure.empty() ? "" : "; failures: ", failure.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_secs;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "quantile LP-oracle equivalence", 30, quantile_lp_oracle},
      {2, "empirical-quantile identity", 5, empirical_quantile_identity},
      {3, "risk-matrix structure", 0, risk_matrix_structure},
      {4, "dCoVaR independence null", 180, covar_independence},
      {5, "VaR error normality", 300, var_error_normality},
      {6, "decomposition identities", 0, decomposition_identities},
      {7, "minimum-variance optimality", 0, min_variance_optimality},
      {8, "centrality oracles", 0, centrality_oracles},
      {9, "strong centrality", 0, strong_centrality_oracle},
      {10, "FOCE determinism and oracle property", 0, foce_oracle},
      {11, "precision recovery", 240, precision_recovery},
      {12, "DGP at paper scale", 0, dgp_paper_scale},
      {13, "end-to-end reproducibility", 0, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = elapsed(t0);
    if (c.budget_secs > 0 && secs >= c.budget_secs) {
      o.pass = false;
      o.detail += fmt("; runtime %.1fs exceeds %.0fs", secs, c.budget_secs);
    }
    failed += !o.pass;
    std::printf("%s  %2d  %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
