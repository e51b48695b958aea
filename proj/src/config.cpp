#include "bakerdim/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bakerdim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "schema_version", "scenario", "alpha", "beta", "seed", "samples", "depth",
      "coupling", "trig_terms", "gtilde", "ensemble_size", "ensemble_sigma",
      "ensemble_max_freq", "ensemble_member", "lambda_grid", "lambda_base",
      "estimator", "sampler", "k_min", "k_max", "centers", "subsample_base",
      "transient", "window_width", "window_x", "window_z", "beta_min", "beta_max",
      "beta_step", "sweep_d2", "n_iters", "renorm_every", "tol_dimension",
      "tol_exponent", "tol_telescoping", "separation_margin", "dump_samples",
      "dump_digits"};
  return keys;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw ConfigError("config: unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError("config: empty value for '" + key + "'");
    kv[key] = value;
  }

  if (!kv.count("schema_version"))
    throw ConfigError("config: schema_version is required");
  if (to_int("schema_version", kv.at("schema_version")) != 1)
    throw ConfigError("config: unsupported schema_version (expected 1)");

  ExperimentConfig c;
  const auto has = [&](const char* k) { return kv.count(k) != 0; };
  const auto str = [&](const char* k) { return kv.at(k); };

  if (has("scenario")) c.scenario = str("scenario");
  if (has("alpha")) c.alpha = to_double("alpha", str("alpha"));
  if (has("beta")) c.beta = to_double("beta", str("beta"));
  if (has("seed"))
    c.seed = static_cast<uint64_t>(to_int("seed", str("seed")));
  if (has("samples"))
    c.samples = static_cast<std::size_t>(to_int("samples", str("samples")));
  if (has("depth")) {
    c.depth = str("depth") == "auto"
                  ? 0
                  : static_cast<int>(to_int("depth", str("depth")));
  }
  if (has("coupling")) c.coupling = str("coupling");
  if (has("trig_terms")) c.trig_terms = str("trig_terms");
  if (has("gtilde")) c.gtilde = str("gtilde");
  if (has("ensemble_size"))
    c.ensemble_size = static_cast<int>(to_int("ensemble_size", str("ensemble_size")));
  if (has("ensemble_sigma"))
    c.ensemble_sigma = to_double("ensemble_sigma", str("ensemble_sigma"));
  if (has("ensemble_max_freq"))
    c.ensemble_max_freq =
        static_cast<int>(to_int("ensemble_max_freq", str("ensemble_max_freq")));
  if (has("ensemble_member"))
    c.ensemble_member =
        static_cast<int>(to_int("ensemble_member", str("ensemble_member")));
  if (has("lambda_grid")) c.lambda_grid = to_list("lambda_grid", str("lambda_grid"));
  if (has("lambda_base")) c.lambda_base = str("lambda_base");
  if (has("estimator")) c.estimator = str("estimator");
  if (has("sampler")) c.sampler = str("sampler");
  if (has("k_min")) c.k_min = static_cast<int>(to_int("k_min", str("k_min")));
  if (has("k_max")) c.k_max = static_cast<int>(to_int("k_max", str("k_max")));
  if (has("centers")) c.centers = static_cast<int>(to_int("centers", str("centers")));
  if (has("subsample_base"))
    c.subsample_base =
        static_cast<std::size_t>(to_int("subsample_base", str("subsample_base")));
  if (has("transient"))
    c.transient = static_cast<int>(to_int("transient", str("transient")));
  if (has("window_width")) c.window_width = to_double("window_width", str("window_width"));
  if (has("window_x")) c.window_x = to_double("window_x", str("window_x"));
  if (has("window_z")) c.window_z = to_double("window_z", str("window_z"));
  if (has("beta_min")) c.beta_min = to_double("beta_min", str("beta_min"));
  if (has("beta_max")) c.beta_max = to_double("beta_max", str("beta_max"));
  if (has("beta_step")) c.beta_step = to_double("beta_step", str("beta_step"));
  if (has("sweep_d2")) c.sweep_d2 = to_bool("sweep_d2", str("sweep_d2"));
  if (has("n_iters")) c.n_iters = to_int("n_iters", str("n_iters"));
  if (has("renorm_every"))
    c.renorm_every = static_cast<int>(to_int("renorm_every", str("renorm_every")));
  if (has("tol_dimension")) c.tol_dimension = to_double("tol_dimension", str("tol_dimension"));
  if (has("tol_exponent")) c.tol_exponent = to_double("tol_exponent", str("tol_exponent"));
  if (has("tol_telescoping"))
    c.tol_telescoping = to_double("tol_telescoping", str("tol_telescoping"));
  if (has("separation_margin"))
    c.separation_margin = to_double("separation_margin", str("separation_margin"));
  if (has("dump_samples")) c.dump_samples = to_bool("dump_samples", str("dump_samples"));
  if (has("dump_digits")) c.dump_digits = to_bool("dump_digits", str("dump_digits"));
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace bakerdim
