#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bakerdim/config.hpp"
#include "bakerdim/experiments.hpp"
#include "bakerdim/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"coupled skinny baker's map experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed_override = -1;
  int threads = 0;

  const char* scenarios[] = {"cross-section", "sweep", "prevalence",
                             "counterexample", "lyapunov", "dimension"};
  for (const char* name : scenarios) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = library default)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    bakerdim::ExperimentConfig cfg = bakerdim::load_experiment_config(config_path);
    if (!cfg.scenario.empty() && cfg.scenario != scenario)
      throw bakerdim::ConfigError("config names scenario '" + cfg.scenario +
                                  "' but subcommand is '" + scenario + "'");
    cfg.scenario = scenario;
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
    bakerdim::set_threads(threads);
    if (out_dir.empty()) out_dir = "out/" + scenario;

    const bakerdim::RunResult rr = bakerdim::run_scenario(cfg, out_dir);
    std::printf("%s: %s (manifest at %s/manifest.json)\n", scenario.c_str(),
                rr.exit_code == 0 ? "all verdicts pass" : "VERDICT FAILURE",
                out_dir.c_str());
    return rr.exit_code;
  } catch (const bakerdim::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
