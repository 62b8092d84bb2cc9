#pragma once

#include "tailrisk/centrality.hpp"
#include "tailrisk/error.hpp"
#include "tailrisk/foce.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

enum class RunMode { Estimate, Rolling, Foce, Precision, Simulate };

std::string_view to_string(RunMode mode) noexcept;
RunMode parse_run_mode(std::string_view name);

struct SimulateSettings {
  // regression design
  Index n = 100;
  Index m = 100;
  Index p = 100;
  Index rank = 3;
  double ar_decay = 0.5;
  // return panel
  Index assets = 5;
  Index state_dim = 2;
  Index periods = 500;
  double correlation = 0.3;    // equicorrelation of the return innovations
  double state_loading = 0.2;  // every asset loads this on every lagged state
};

struct RunConfig {
  RunMode mode = RunMode::Estimate;
  double tau = 0.05;
  /// Rolling: window length (required). Other modes: use only the last
  /// `window` periods when > 0.
  Index window = 0;
  Index step = 1;
  CentralityKind centrality = CentralityKind::Eigenvector;
  double epsilon = 1e-6;
  FoceObjective foce_objective = FoceObjective::Auto;
  std::uint64_t seed = 42;
  std::filesystem::path returns_path;
  std::filesystem::path state_path;
  std::filesystem::path out_dir = "out";
  double lambda_scale = 0.5;
  unsigned threads = 0;
  SimulateSettings simulate;
};

/// Overrides fields with the keys present in a JSON config file. Unknown
/// keys and wrong types raise ErrorKind::Config.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Checks ranges and required paths; throws ErrorKind::Config.
void validate(const RunConfig& cfg);

/// 2 parse, 4 configuration, 3 everything numeric or model related.
int exit_code_for(ErrorKind kind) noexcept;

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> artifacts;  // file names relative to out_dir
};

/// Runs one mode end to end and writes its artifacts plus run_manifest.json
/// into cfg.out_dir. On failure error.json is written as well; nothing is
/// thrown.
RunResult run_pipeline(const RunConfig& cfg);

}  // namespace tailrisk
