#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace bakerdim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Resolved experiment configuration. Source format is flat key = value
/// text with '#' comments; schema_version is mandatory and unknown keys are
/// errors. The seed fixes every downstream RNG stream.
struct ExperimentConfig {
  std::string scenario;

  double alpha = 0.0;
  double beta = 0.0;
  uint64_t seed = 1;
  std::size_t samples = 200000;
  int depth = 0;  // 0 = derive from coupling and tolerance

  std::string coupling = "zero";  // zero|probe|trig|random-trig|cohomologous
  std::string trig_terms = "1:0.5:1.5:0:0";
  std::string gtilde = "sin2tanh";  // sin2tanh|const:<v>
  int ensemble_size = 10;
  double ensemble_sigma = 0.5;
  int ensemble_max_freq = 4;
  int ensemble_member = 0;
  std::vector<double> lambda_grid{0.0, 0.5, 1.0};
  std::string lambda_base = "zero";

  std::string estimator = "correlation";  // correlation|information|box|pointwise
  std::string sampler = "pushforward";    // pushforward|orbit
  int k_min = 0;  // 0 = estimator/dimension default window
  int k_max = 0;
  int centers = 200;
  std::size_t subsample_base = 20000;
  int transient = 100;

  double window_width = 0.02;
  double window_x = 0.5;
  double window_z = 0.5;

  double beta_min = 0.02;
  double beta_max = 0.48;
  double beta_step = 0.01;
  bool sweep_d2 = false;

  long long n_iters = 10000;
  int renorm_every = 8;

  double tol_dimension = 0.08;
  double tol_exponent = 1e-6;
  double tol_telescoping = 1e-10;
  double separation_margin = 0.06;

  bool dump_samples = false;
  bool dump_digits = false;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace bakerdim
