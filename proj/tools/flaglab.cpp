#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "flaglab/errors.hpp"
#include "flaglab/pipeline.hpp"

using namespace flaglab;

int main(int argc, char** argv) {
  CLI::App app{"flaglab: contraction, ping-pong and growth experiments in SL(n,R)"};
  app.require_subcommand(1);

  std::string config_path, generators_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> radius, exact_check;
  std::optional<double> epsilon, delta;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "pipeline configuration (JSON)");
    cmd->add_option("--generators", generators_path, "generator file, overrides the config");
    cmd->add_option("--seed", seed, "global sampling seed");
    cmd->add_option("--radius", radius, "word-ball radius");
    cmd->add_option("--epsilon", epsilon, "contraction scale");
    cmd->add_option("--delta", delta, "target exponent");
    cmd->add_option("--exact-check", exact_check, "exact freeness check up to this word length");
    cmd->add_option("--out", out_dir, "output directory");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "growth and limit-cone estimates on a word ball");
  CLI::App* build = app.add_subcommand("build-semigroup", "search for a certified free subsemigroup");
  CLI::App* certify = app.add_subcommand("certify", "ping-pong certificate for a generator set");
  for (auto* cmd : {analyze, build, certify}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  PipelineConfig config;
  try {
    if (!config_path.empty()) {
      config = load_config(config_path);
    } else if (generators_path.empty()) {
      std::cerr << "error: --config or --generators is required\n";
      return kExitConfig;
    }
    if (!generators_path.empty()) config.generators = load_generators(generators_path);
    if (seed) config.seed = *seed;
    if (radius) config.radius = *radius;
    if (epsilon) config.epsilon = *epsilon;
    if (delta) config.target_delta = *delta;
    if (exact_check) config.exact_check = *exact_check;
    if (!out_dir.empty()) config.output_dir = out_dir;
    validate_config(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunResult result;
  if (analyze->parsed())
    result = run_analyze(config);
  else if (build->parsed())
    result = run_build_semigroup(config);
  else
    result = run_certify(config);
  (result.exit_code == kExitPass ? std::cout : std::cerr) << result.message << '\n';
  return result.exit_code;
}
