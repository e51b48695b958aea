#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bakerdim/config.hpp"
#include "bakerdim/dynamics.hpp"

namespace bakerdim {

/// Coupling drawn from the probe ensemble: integer frequencies a in
/// 0..max_freq, b in 1..max_freq, amplitudes N(0, (sigma/(1+a^2+b^2))^2),
/// phases uniform. Keyed by (seed, member); scheduling-independent.
CouplingPtr draw_trig_coupling(uint64_t seed, uint64_t member, double sigma,
                               int max_freq);

std::vector<TrigTerm> parse_trig_terms(const std::string& spec);

/// Coupling named by the config (zero | probe | trig | random-trig |
/// cohomologous).
CouplingPtr build_coupling(const ExperimentConfig& cfg, const Params& p);

struct RunResult {
  int exit_code = 0;  // 0 all-pass, 2 verdict failure
  nlohmann::ordered_json manifest;
};

/// Runs one scenario, writing manifest.json, CSVs and plots under out_dir.
/// Throws ConfigError on invalid configuration (CLI maps that to exit 1).
RunResult run_scenario(const ExperimentConfig& cfg,
                       const std::filesystem::path& out_dir);

/// Default dyadic window [k_min, k_max] for an estimator at a given cloud
/// dimension; used when the config leaves k_min/k_max at 0.
std::pair<int, int> default_window(const std::string& estimator, int dim);

}  // namespace bakerdim
