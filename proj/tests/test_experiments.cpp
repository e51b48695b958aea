#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bakerdim/experiments.hpp"
#include "bakerdim/io.hpp"
#include "bakerdim/parallel.hpp"

using namespace bakerdim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "bakerdim_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing accepts the documented keys") {
  const ExperimentConfig c = parse_experiment_config(
      "schema_version = 1\n"
      "alpha = 0.1   # drive rate\n"
      "beta = 0.4\n"
      "seed = 7\n"
      "samples = 5000\n"
      "coupling = trig\n"
      "trig_terms = 1:0.5:1.5:0:0\n"
      "lambda_grid = 0, 0.5, 1\n"
      "sweep_d2 = false\n");
  CHECK(c.alpha == 0.1);
  CHECK(c.beta == 0.4);
  CHECK(c.seed == 7);
  CHECK(c.samples == 5000);
  CHECK(c.coupling == "trig");
  CHECK(c.lambda_grid.size() == 3);
  CHECK_FALSE(c.sweep_d2);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(parse_experiment_config(""), ConfigError);  // no schema
  CHECK_THROWS_AS(parse_experiment_config("schema_version = 2\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config("schema_version = 1\nalhpa = 0.1\n"),  // typo
      ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_config("schema_version = 1\nalpha = 0.1\nalpha = 0.2\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("schema_version = 1\nalpha\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("schema_version = 1\nseed = abc\n"),
                  ConfigError);
}

TEST_CASE("trig term specs parse or fail loudly") {
  const auto terms = parse_trig_terms("1:0.5:1.5:0:0;0.3:2:1:0.1:0.2");
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].amplitude == 1.0);
  CHECK(terms[1].freq_x == 2.0);
  CHECK_THROWS_AS(parse_trig_terms("1:2:3"), ConfigError);
  CHECK_THROWS_AS(parse_trig_terms("a:b:c:d:e"), ConfigError);
}

TEST_CASE("ensemble draws are keyed by seed and member") {
  const CouplingPtr a = draw_trig_coupling(5, 1, 0.5, 4);
  const CouplingPtr b = draw_trig_coupling(5, 1, 0.5, 4);
  const CouplingPtr c = draw_trig_coupling(5, 2, 0.5, 4);
  CHECK(a->describe() == b->describe());
  CHECK(a->describe() != c->describe());
  CHECK(a->sup_norm() > 0.0);
}

TEST_CASE("build_coupling covers the config vocabulary") {
  ExperimentConfig cfg;
  cfg.alpha = 0.1;
  cfg.beta = 0.4;
  const Params p(cfg.alpha, cfg.beta);
  cfg.coupling = "zero";
  CHECK(build_coupling(cfg, p)->is_zero());
  cfg.coupling = "probe";
  CHECK(build_coupling(cfg, p)->eval(0.2, 0.7) == 0.7);
  cfg.coupling = "trig";
  CHECK(build_coupling(cfg, p)->sup_norm() == 1.0);
  cfg.coupling = "random-trig";
  CHECK(build_coupling(cfg, p)->sup_norm() > 0.0);
  cfg.coupling = "cohomologous";
  CHECK(build_coupling(cfg, p)->describe() == "cohomologous(sin2tanh)");
  cfg.gtilde = "const:0.5";
  CHECK(build_coupling(cfg, p)->eval(0.1, 0.1) ==
        doctest::Approx(0.5 * (1 - 0.4)).epsilon(1e-15));
  cfg.coupling = "bogus";
  CHECK_THROWS_AS(build_coupling(cfg, p), ConfigError);
}

TEST_CASE("dimension scenario is deterministic across thread counts") {
  ExperimentConfig cfg;
  cfg.scenario = "dimension";
  cfg.alpha = 0.3;
  cfg.beta = 0.2;
  cfg.seed = 31;
  cfg.samples = 20000;
  cfg.coupling = "trig";
  cfg.k_min = 3;
  cfg.k_max = 7;
  cfg.dump_samples = true;

  const fs::path d1 = fresh_dir("dim1");
  const fs::path d8 = fresh_dir("dim8");
  const int saved = max_threads();
  set_threads(1);
  const RunResult r1 = run_scenario(cfg, d1);
  set_threads(8);
  const RunResult r8 = run_scenario(cfg, d8);
  set_threads(saved);

  CHECK(slurp(d1 / "per_scale.csv") == slurp(d8 / "per_scale.csv"));
  CHECK(slurp(d1 / "samples.csv") == slurp(d8 / "samples.csv"));

  nlohmann::ordered_json m1 = r1.manifest;
  nlohmann::ordered_json m8 = r8.manifest;
  m1.erase("wall_clock_seconds");
  m8.erase("wall_clock_seconds");
  CHECK(m1 == m8);
  CHECK(m1["results"].size() > 0);
}

TEST_CASE("sweep scenario emits the curves and keeps D1 below DL") {
  ExperimentConfig cfg;
  cfg.scenario = "sweep";
  cfg.alpha = 0.05;
  cfg.beta = 0.1;  // unused by sweep
  cfg.beta_min = 0.02;
  cfg.beta_max = 0.48;
  cfg.beta_step = 0.005;

  const fs::path out = fresh_dir("sweep");
  const RunResult r = run_scenario(cfg, out);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "sweep.svg"));
  CHECK(fs::exists(out / "manifest.json"));

  // every emitted row satisfies d1 <= dl
  std::ifstream in(out / "sweep.csv");
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    double beta, d1, dl;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &beta, &d1, &dl) == 3);
    REQUIRE(d1 <= dl + 1e-12);
    ++rows;
  }
  CHECK(rows >= 90);
}

TEST_CASE("cross-section scenario warns when the window is too small") {
  ExperimentConfig cfg;
  cfg.scenario = "cross-section";
  cfg.alpha = 0.4;
  cfg.beta = 0.43;
  cfg.coupling = "trig";
  cfg.samples = 30000;
  cfg.window_width = 0.004;  // survivors ~ 0.5

  const fs::path out = fresh_dir("xsec_small");
  const RunResult r = run_scenario(cfg, out);
  CHECK(r.manifest["warnings"].size() > 0);
  const std::string w = r.manifest["warnings"][0].get<std::string>();
  CHECK(w.find("enlarge") != std::string::npos);
}

TEST_CASE("lyapunov scenario passes its verdicts") {
  ExperimentConfig cfg;
  cfg.scenario = "lyapunov";
  cfg.alpha = 0.3;
  cfg.beta = 0.2;
  cfg.coupling = "trig";
  cfg.n_iters = 10000;

  const fs::path out = fresh_dir("lyap");
  const RunResult r = run_scenario(cfg, out);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "convergence.csv"));
  CHECK(r.manifest["details"]["converged"].get<bool>());
}

TEST_CASE("prevalence scenario validates its preconditions") {
  ExperimentConfig cfg;
  cfg.scenario = "prevalence";
  cfg.alpha = 0.4;
  cfg.beta = 0.1;  // wrong ordering
  CHECK_THROWS_AS(run_scenario(cfg, fresh_dir("prev_bad")), ConfigError);

  cfg.alpha = 0.1;
  cfg.beta = 0.4;
  cfg.ensemble_size = 5;  // too few members
  CHECK_THROWS_AS(run_scenario(cfg, fresh_dir("prev_small")), ConfigError);
}

TEST_CASE("counterexample scenario certifies the telescoping identity") {
  ExperimentConfig cfg;
  cfg.scenario = "counterexample";
  cfg.alpha = 0.1;
  cfg.beta = 0.4;
  cfg.samples = 50000;
  cfg.seed = 5;

  const fs::path out = fresh_dir("counter");
  const RunResult r = run_scenario(cfg, out);
  bool found = false;
  for (const auto& row : r.manifest["results"])
    if (row["quantity"] == "telescoping_residual_max") {
      found = true;
      CHECK(row["pass"].get<bool>());
      CHECK(row["value"].get<double>() <= 1e-10);
    }
  CHECK(found);
}

TEST_CASE("unknown scenario is a config error") {
  ExperimentConfig cfg;
  cfg.scenario = "mystery";
  CHECK_THROWS_AS(run_scenario(cfg, fresh_dir("mystery")), ConfigError);
}

TEST_CASE("csv writer uses 17 significant digits") {
  const fs::path out = fresh_dir("csv");
  const std::vector<std::vector<double>> rows = {{1.0 / 3.0, 0.1}};
  write_csv(out / "t.csv", "a,b", rows);
  const std::string text = slurp(out / "t.csv");
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(format_g17(2.0) == "2");
}
