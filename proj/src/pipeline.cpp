#include "tailrisk/pipeline.hpp"

#include "tailrisk/io.hpp"
#include "tailrisk/portfolio.hpp"
#include "tailrisk/precision.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/simulate.hpp"
#include "tailrisk/tail_risk.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tailrisk {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Config, what); }

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error("config key '" + key + "' has the wrong type");
  }
}

Index get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer()) config_error("config key '" + key + "' must be an integer");
  return static_cast<Index>(j.get<std::int64_t>());
}

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) config_error("config key '" + key + "' must be a number");
  return j.get<double>();
}

json config_echo(const RunConfig& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  j["tau"] = c.tau;
  j["window"] = c.window;
  j["step"] = c.step;
  j["centrality"] = std::string(to_string(c.centrality));
  j["epsilon"] = c.epsilon;
  j["foce_objective"] = std::string(to_string(c.foce_objective));
  j["seed"] = c.seed;
  j["returns"] = c.returns_path.generic_string();
  j["state"] = c.state_path.generic_string();
  j["out_dir"] = c.out_dir.generic_string();
  j["lambda_scale"] = c.lambda_scale;
  j["threads"] = c.threads;
  const auto& s = c.simulate;
  j["simulate"] = {{"n", s.n},           {"m", s.m},
                   {"p", s.p},           {"rank", s.rank},
                   {"ar_decay", s.ar_decay}, {"assets", s.assets},
                   {"state_dim", s.state_dim}, {"periods", s.periods},
                   {"correlation", s.correlation}, {"state_loading", s.state_loading}};
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& ch : out)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) ch = '_';
  return out;
}

class Run {
 public:
  explicit Run(const RunConfig& cfg) : cfg_(cfg) {}

  void execute() {
    switch (cfg_.mode) {
      case RunMode::Estimate: estimate(); break;
      case RunMode::Rolling: rolling(); break;
      case RunMode::Foce: foce(); break;
      case RunMode::Precision: precision(); break;
      case RunMode::Simulate: simulate(); break;
    }
  }

  std::vector<std::string> artifacts;
  json diagnostics = json::object();

 private:
  std::filesystem::path out(const std::string& name) {
    artifacts.push_back(name);
    return cfg_.out_dir / name;
  }

  PanelData panel() {
    PanelData p = load_panel(cfg_.returns_path, cfg_.state_path);
    diagnostics["assets"] = p.assets();
    diagnostics["state_dim"] = p.state_dim();
    diagnostics["periods"] = p.periods();
    if (cfg_.mode != RunMode::Rolling && cfg_.window > 0) {
      if (cfg_.window > p.periods()) {
        fail(ErrorKind::Config, "window " + std::to_string(cfg_.window) + " exceeds the " +
                                    std::to_string(p.periods()) + " aligned periods");
      }
      p = p.window(p.periods() - cfg_.window, cfg_.window);
      diagnostics["periods_used"] = p.periods();
    }
    return p;
  }

  RiskMatrix risk_matrix(const PanelData& p) {
    const TailForecasts f = forecast_all(p, QuantileLevel(cfg_.tau), cfg_.threads);
    RiskMatrix r = build_risk_matrix(f);
    diagnostics["positive_definite"] = r.is_positive_definite;
    diagnostics["min_eigenvalue"] = r.min_eigenvalue;
    return r;
  }

  void write_centrality(const std::string& name, const RiskMatrix& r) {
    const auto scores = compute_centrality(adjacency_from_risk(r), cfg_.centrality);
    const auto ranks = centrality_ranks(scores.scores);
    std::ofstream o(out(name), std::ios::binary | std::ios::trunc);
    if (!o) fail(ErrorKind::Config, "cannot write " + name);
    o << "node,kind,score,rank\n";
    for (Index i = 0; i < scores.scores.size(); ++i) {
      o << r.node_ids[static_cast<std::size_t>(i)] << ',' << to_string(cfg_.centrality) << ','
        << format_double(scores.scores(i)) << ',' << ranks[static_cast<std::size_t>(i)] << '\n';
    }
    if (scores.disconnected) diagnostics["centrality_disconnected"] = true;
  }

  void estimate() {
    const PanelData p = panel();
    const RiskMatrix r = risk_matrix(p);
    write_labeled_matrix(out("risk_matrix.csv"), r.node_ids, r.gamma);
    write_centrality("centrality.csv", r);
    const PortfolioWeights w = min_variance_weights(r);
    std::ofstream o(out("weights.csv"), std::ios::binary | std::ios::trunc);
    o << "node,weight\n";
    for (Index i = 0; i < w.weights.size(); ++i) {
      o << r.node_ids[static_cast<std::size_t>(i)] << ',' << format_double(w.weights(i)) << '\n';
    }
    diagnostics["gross_exposure"] = w.gross;
    diagnostics["quadratic_loss"] = quadratic_loss(r, w);
  }

  void rolling() {
    const PanelData p = panel();
    if (cfg_.window < p.state_dim() + 3) {
      fail(ErrorKind::Config, "window must be at least state_dim + 3 = " + std::to_string(p.state_dim() + 3));
    }
    if (cfg_.window > p.periods()) {
      fail(ErrorKind::Config, "window " + std::to_string(cfg_.window) + " exceeds the " +
                                  std::to_string(p.periods()) + " aligned periods");
    }
    const auto windows = rolling_forecast(p, cfg_.window, cfg_.step, QuantileLevel(cfg_.tau), cfg_.threads);
    std::ostringstream summary;
    summary << "timestamp,positive_definite,min_eigenvalue\n";
    for (const auto& w : windows) {
      const std::string tag = sanitize(w.timestamp);
      write_labeled_matrix(out("risk_matrix_" + tag + ".csv"), w.risk.node_ids, w.risk.gamma);
      write_centrality("centrality_" + tag + ".csv", w.risk);
      summary << w.timestamp << ',' << (w.risk.is_positive_definite ? 1 : 0) << ','
              << format_double(w.risk.min_eigenvalue) << '\n';
    }
    std::ofstream o(out("rolling_summary.csv"), std::ios::binary | std::ios::trunc);
    o << summary.str();
    diagnostics["windows"] = windows.size();
  }

  void foce() {
    const PanelData p = panel();
    const RiskMatrix r = risk_matrix(p);
    write_labeled_matrix(out("risk_matrix.csv"), r.node_ids, r.gamma);
    FoceConfig fc;
    fc.centrality_kind = cfg_.centrality;
    fc.epsilon = cfg_.epsilon;
    fc.objective = cfg_.foce_objective;
    const FoceOrdering o = foce_order(r, fc);
    std::ofstream f(out("ordering.csv"), std::ios::binary | std::ios::trunc);
    f << "step,removed_node,objective,stopped\n";
    for (std::size_t k = 0; k < o.removed.size(); ++k) {
      const bool last = static_cast<Index>(k + 1) == o.stop_index;
      f << (k + 1) << ',' << o.removed[k] << ',' << format_double(o.objective_trace(static_cast<Index>(k)))
        << ',' << (last ? 1 : 0) << '\n';
    }
    diagnostics["foce_objective"] = std::string(to_string(o.objective));
    diagnostics["initial_objective"] = o.initial_objective;
    diagnostics["stop_index"] = o.stop_index;
    diagnostics["selected_set"] = o.selected_set;
    diagnostics["fallback_steps"] = o.fallback_steps;
    diagnostics["fallback_reasons"] = o.fallback_reasons;
  }

  void precision() {
    const PanelData p = panel();
    const Matrix y = p.returns().transpose();
    const Vector lambdas = Vector::Constant(y.cols(), default_lambda(y.rows(), y.cols(), cfg_.lambda_scale));
    const PrecisionEstimate est = estimate_precision(y, lambdas, cfg_.threads);
    write_labeled_matrix(out("omega.csv"), p.asset_names(), est.omega_hat);
    diagnostics["lambda"] = lambdas(0);
    int sweeps = 0;
    for (const auto& fit : est.fits) sweeps = std::max(sweeps, fit.sweeps);
    diagnostics["max_sweeps"] = sweeps;
  }

  void simulate() {
    const auto& s = cfg_.simulate;
    SimSpec spec;
    spec.n = s.n;
    spec.m = s.m;
    spec.p = s.p;
    spec.rank = s.rank;
    spec.ar_decay = s.ar_decay;
    spec.seed = cfg_.seed;
    const DgpSample d = simulate_dgp(spec);
    write_plain_matrix(out("x.csv"), "x", d.x);
    write_plain_matrix(out("y.csv"), "y", d.y);
    write_plain_matrix(out("gamma_true.csv"), "g", d.gamma_true);

    PanelSimSpec ps;
    ps.assets = s.assets;
    ps.state_dim = s.state_dim;
    ps.periods = s.periods;
    ps.dependence = Matrix::Constant(s.assets, s.assets, s.correlation);
    ps.dependence.diagonal().setOnes();
    ps.state_loading = Matrix::Constant(s.assets, s.state_dim, s.state_loading);
    // distinct stream from the regression design
    ps.seed = CounterRng::mix(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
    const PanelData panel = simulate_return_panel(ps);
    DatedTable r{panel.asset_names(), panel.timestamps(), panel.returns().transpose()};
    write_dated_csv(out("returns.csv"), r);
    if (panel.state_dim() > 0) {
      DatedTable st{panel.state_names(), panel.timestamps(), panel.state().transpose()};
      write_dated_csv(out("state.csv"), st);
    }
  }

  const RunConfig& cfg_;
};

}  // namespace

std::string_view to_string(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::Estimate: return "estimate";
    case RunMode::Rolling: return "rolling";
    case RunMode::Foce: return "foce";
    case RunMode::Precision: return "precision";
    case RunMode::Simulate: return "simulate";
  }
  return "unknown";
}

RunMode parse_run_mode(std::string_view name) {
  for (auto m : {RunMode::Estimate, RunMode::Rolling, RunMode::Foce, RunMode::Precision, RunMode::Simulate}) {
    if (to_string(m) == name) return m;
  }
  config_error("unknown mode '" + std::string(name) + "'");
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) config_error("config file must hold a JSON object");
  // relative paths in the file are taken relative to the file itself
  const auto base = path.parent_path();
  auto resolve = [&](const json& v, const std::string& key) {
    std::filesystem::path p = get_as<std::string>(v, key);
    return p.is_relative() && !p.empty() ? base / p : p;
  };
  auto kind_of = [](auto&& parse, const std::string& s) {
    try {
      return parse(s);
    } catch (const Error& e) {
      config_error(e.what());
    }
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "mode") cfg.mode = parse_run_mode(get_as<std::string>(v, key));
    else if (key == "tau") cfg.tau = get_real(v, key);
    else if (key == "window") cfg.window = get_count(v, key);
    else if (key == "step") cfg.step = get_count(v, key);
    else if (key == "centrality")
      cfg.centrality = kind_of([](const std::string& s) { return parse_centrality_kind(s); }, get_as<std::string>(v, key));
    else if (key == "epsilon") cfg.epsilon = get_real(v, key);
    else if (key == "foce_objective")
      cfg.foce_objective = kind_of([](const std::string& s) { return parse_foce_objective(s); }, get_as<std::string>(v, key));
    else if (key == "seed") {
      if (!v.is_number_unsigned()) config_error("config key 'seed' must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "returns") cfg.returns_path = resolve(v, key);
    else if (key == "state") cfg.state_path = resolve(v, key);
    else if (key == "out_dir") cfg.out_dir = resolve(v, key);
    else if (key == "lambda_scale") cfg.lambda_scale = get_real(v, key);
    else if (key == "threads") {
      if (!v.is_number_unsigned()) config_error("config key 'threads' must be a non-negative integer");
      cfg.threads = v.get<unsigned>();
    } else if (key == "simulate") {
      if (!v.is_object()) config_error("config key 'simulate' must be an object");
      auto& s = cfg.simulate;
      for (const auto& [k, x] : v.items()) {
        const std::string full = "simulate." + k;
        if (k == "n") s.n = get_count(x, full);
        else if (k == "m") s.m = get_count(x, full);
        else if (k == "p") s.p = get_count(x, full);
        else if (k == "rank") s.rank = get_count(x, full);
        else if (k == "ar_decay") s.ar_decay = get_real(x, full);
        else if (k == "assets") s.assets = get_count(x, full);
        else if (k == "state_dim") s.state_dim = get_count(x, full);
        else if (k == "periods") s.periods = get_count(x, full);
        else if (k == "correlation") s.correlation = get_real(x, full);
        else if (k == "state_loading") s.state_loading = get_real(x, full);
        else config_error("unknown config key '" + full + "'");
      }
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) config_error("tau must lie in (0, 1)");
  if (cfg.window < 0) config_error("window must be >= 0");
  if (cfg.step < 1) config_error("step must be >= 1");
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) config_error("epsilon must be finite and >= 0");
  if (!(cfg.lambda_scale >= 0.0) || !std::isfinite(cfg.lambda_scale)) config_error("lambda-scale must be finite and >= 0");
  if (cfg.out_dir.empty()) config_error("out-dir is required");
  if (cfg.mode == RunMode::Simulate) {
    const auto& s = cfg.simulate;
    if (s.n < 1 || s.m < 1 || s.p < 1) config_error("simulate: n, m and p must be positive");
    if (s.rank < 1 || s.rank > std::min(s.p, s.m)) config_error("simulate: rank must lie in [1, min(p, m)]");
    if (!(s.ar_decay >= 0.0 && s.ar_decay < 1.0)) config_error("simulate: ar_decay must lie in [0, 1)");
    if (s.assets < 2 || s.state_dim < 0 || s.periods < s.state_dim + 3) {
      config_error("simulate: need assets >= 2, state_dim >= 0 and periods >= state_dim + 3");
    }
    const double lo = -1.0 / static_cast<double>(s.assets - 1);
    if (!(s.correlation >= lo && s.correlation <= 1.0)) {
      config_error("simulate: correlation must lie in [" + std::to_string(lo) + ", 1]");
    }
    if (!std::isfinite(s.state_loading)) config_error("simulate: state_loading must be finite");
    return;
  }
  if (cfg.returns_path.empty()) config_error("--returns is required for mode " + std::string(to_string(cfg.mode)));
  if (!std::filesystem::is_regular_file(cfg.returns_path)) {
    config_error("returns file not found: " + cfg.returns_path.string());
  }
  if (!cfg.state_path.empty() && !std::filesystem::is_regular_file(cfg.state_path)) {
    config_error("state file not found: " + cfg.state_path.string());
  }
  if (cfg.mode == RunMode::Rolling && cfg.window < 1) config_error("rolling mode needs --window");
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Config: return 4;
    default: return 3;
  }
}

RunResult run_pipeline(const RunConfig& cfg) {
  RunResult result;
  json manifest;
  manifest["tool"] = "tailrisk";
  manifest["version"] = kVersion;
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION);
  manifest["rng"] = "splitmix64-counter";
  manifest["seed"] = cfg.seed;
  manifest["config"] = config_echo(cfg);

  Run run(cfg);
  ErrorKind kind = ErrorKind::InvalidArgument;
  bool failed = false;
  try {
    validate(cfg);
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) config_error("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
    run.execute();
  } catch (const Error& e) {
    failed = true;
    kind = e.kind();
    result.message = e.what();
  } catch (const std::exception& e) {
    failed = true;
    kind = ErrorKind::Domain;
    result.message = e.what();
  }
  result.exit_code = failed ? exit_code_for(kind) : 0;
  result.artifacts = run.artifacts;

  manifest["status"] = failed ? "error" : "ok";
  manifest["exit_code"] = result.exit_code;
  manifest["diagnostics"] = run.diagnostics;
  manifest["artifacts"] = run.artifacts;

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) return result;  // nowhere to record anything
  try {
    if (failed) {
      json err;
      err["status"] = "error";
      err["kind"] = to_string(kind);
      err["message"] = result.message;
      err["exit_code"] = result.exit_code;
      write_json(cfg.out_dir / "error.json", err);
    } else {
      std::filesystem::remove(cfg.out_dir / "error.json", ec);
    }
    write_json(cfg.out_dir / "run_manifest.json", manifest);
  } catch (const Error& e) {
    if (!failed) {
      result.exit_code = exit_code_for(e.kind());
      result.message = e.what();
    }
  }
  return result;
}

}  // namespace tailrisk
