#pragma once

// The three command-line workflows as library calls. Each writes its outputs
// into the configured directory and returns the process exit code:
// 0 pass, 1 certificate failure, 2 configuration error, 3 budget error,
// 4 search exhausted.

#include <optional>
#include <string>
#include <vector>

#include "flaglab/io.hpp"

namespace flaglab {

enum ExitCode : int { kExitPass = 0, kExitCertificateFail = 1, kExitConfig = 2, kExitBudget = 3, kExitExhausted = 4 };

struct PipelineConfig {
  std::vector<GroupElement> generators;
  double target_delta = 0.05;
  double epsilon = 0.05;
  std::optional<Cone> cone;  // auto when empty
  double auto_cone_half_angle = M_PI / 8;
  std::optional<Flag> anchor_x;
  std::optional<OppositeFlag> anchor_y;
  std::optional<double> n_min;  // auto when empty
  double width = 1.0;
  int radius = 8;
  bool include_inverses = true;
  std::optional<Dedup> dedup;  // exact when every generator is exact, float otherwise
  int samples = 4000;
  double node_cap = 1e7;
  int retries = 5;
  int probes = 200;
  std::optional<double> R;  // calibrated when empty
  std::vector<double> R_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  ShadowMode shadow_mode = ShadowMode::SymmetricSpace;
  std::vector<Word> pinned;
  std::optional<int> exact_check;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  double bin_width = 0.25;
  std::vector<double> angles = {M_PI / 4, M_PI / 6, M_PI / 8, M_PI / 12, M_PI / 16};
  std::optional<Vector> direction;  // growth-indicator direction; auto when empty
};

// Relative generator paths are resolved against base_dir.
PipelineConfig config_from_json(const Json& j, const std::string& base_dir);
PipelineConfig load_config(const std::string& path);
// Re-checks the anchor bound after command-line overrides.
void validate_config(const PipelineConfig& config);

struct RunResult {
  int exit_code = kExitPass;
  std::string message;
  Json report;
};

RunResult run_analyze(const PipelineConfig& config);
RunResult run_build_semigroup(const PipelineConfig& config);
RunResult run_certify(const PipelineConfig& config);

// Recomputes the verdict of a stored certificate.json from its margins alone.
bool revalidate_certificate(const Json& certificate_file);

}  // namespace flaglab
