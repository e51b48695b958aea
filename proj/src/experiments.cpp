#include "bakerdim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bakerdim/dimension.hpp"
#include "bakerdim/io.hpp"
#include "bakerdim/lyapunov.hpp"
#include "bakerdim/measure.hpp"
#include "bakerdim/rng.hpp"
#include "bakerdim/svg.hpp"

namespace bakerdim {

using json = nlohmann::ordered_json;

CouplingPtr draw_trig_coupling(uint64_t seed, uint64_t member, double sigma,
                               int max_freq) {
  SplitMix64 rng = stream_rng(seed, kStreamEnsemble, member);
  std::vector<TrigTerm> terms;
  for (int a = 0; a <= max_freq; ++a)
    for (int b = 1; b <= max_freq; ++b) {
      TrigTerm t;
      const double da = a, db = b;
      t.amplitude = sigma / (1.0 + da * da + db * db) * rng.next_gaussian();
      t.freq_x = da;
      t.freq_y = db;
      t.phase_x = 6.283185307179586476925286766559 * rng.next_unit();
      t.phase_y = 6.283185307179586476925286766559 * rng.next_unit();
      terms.push_back(t);
    }
  return make_trig_coupling(std::move(terms));
}

std::vector<TrigTerm> parse_trig_terms(const std::string& spec) {
  std::vector<TrigTerm> terms;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    TrigTerm t;
    double* fields[5] = {&t.amplitude, &t.freq_x, &t.freq_y, &t.phase_x, &t.phase_y};
    std::stringstream fs(item);
    std::string num;
    int i = 0;
    while (std::getline(fs, num, ':')) {
      if (i >= 5) throw ConfigError("trig_terms: too many fields in '" + item + "'");
      try {
        *fields[i++] = std::stod(num);
      } catch (const std::exception&) {
        throw ConfigError("trig_terms: bad number '" + num + "'");
      }
    }
    if (i != 5)
      throw ConfigError("trig_terms: expected c:fx:fy:px:py, got '" + item + "'");
    terms.push_back(t);
  }
  return terms;
}

CouplingPtr build_coupling(const ExperimentConfig& cfg, const Params& p) {
  if (cfg.coupling == "zero") return make_zero_coupling();
  if (cfg.coupling == "probe") return make_probe_coupling();
  if (cfg.coupling == "trig") return make_trig_coupling(parse_trig_terms(cfg.trig_terms));
  if (cfg.coupling == "random-trig")
    return draw_trig_coupling(cfg.seed, static_cast<uint64_t>(cfg.ensemble_member),
                              cfg.ensemble_sigma, cfg.ensemble_max_freq);
  if (cfg.coupling == "cohomologous") {
    CouplingPtr gt;
    if (cfg.gtilde == "sin2tanh")
      gt = make_sine_squared_tanh();
    else if (cfg.gtilde.rfind("const:", 0) == 0)
      gt = make_constant_coupling(std::stod(cfg.gtilde.substr(6)));
    else
      throw ConfigError("config: unknown gtilde '" + cfg.gtilde + "'");
    return make_cohomologous_coupling(p, gt);
  }
  throw ConfigError("config: unknown coupling '" + cfg.coupling + "'");
}

std::pair<int, int> default_window(const std::string& estimator, int dim) {
  const bool high = dim >= 4;
  if (estimator == "correlation") return high ? std::pair{4, 10} : std::pair{3, 14};
  if (estimator == "information") return high ? std::pair{2, 5} : std::pair{3, 10};
  if (estimator == "box") return high ? std::pair{2, 6} : std::pair{3, 12};
  if (estimator == "pointwise") return high ? std::pair{1, 5} : std::pair{3, 12};
  throw ConfigError("config: unknown estimator '" + estimator + "'");
}

namespace {

constexpr const char* kEnsembleLaw =
    "amplitudes N(0,(sigma/(1+a^2+b^2))^2) on cos(a pi x+px)sin(b pi y+py), "
    "a=0..max_freq, b=1..max_freq, phases U[0,2pi)";

struct ManifestBuilder {
  json results = json::array();
  json warnings = json::array();
  json artifacts = json::array();
  bool all_pass = true;

  void add_value(const std::string& name, double value) {
    results.push_back({{"quantity", name}, {"value", value}});
  }

  void add_info(const std::string& name, const json& value) {
    results.push_back({{"quantity", name}, {"value", value}});
  }

  void add_verdict(const std::string& name, double value, double reference,
                   double tolerance, double stderr_ = -1.0) {
    const bool pass = std::abs(value - reference) <= tolerance;
    json row = {{"quantity", name},
                {"value", value},
                {"reference", reference},
                {"tolerance", tolerance},
                {"pass", pass}};
    if (stderr_ >= 0.0) row["stderr"] = stderr_;
    results.push_back(row);
    all_pass = all_pass && pass;
  }

  void add_bound(const std::string& name, double value, double bound, bool below,
                 double stderr_ = -1.0) {
    const bool pass = below ? value < bound : value > bound;
    json row = {{"quantity", name},
                {"value", value},
                {below ? "must_be_below" : "must_be_above", bound},
                {"pass", pass}};
    if (stderr_ >= 0.0) row["stderr"] = stderr_;
    results.push_back(row);
    all_pass = all_pass && pass;
  }

  void warn(const std::string& msg) { warnings.push_back(msg); }
  void artifact(const std::string& name) { artifacts.push_back(name); }
};

json config_echo(const ExperimentConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["depth"] = c.depth;
  j["coupling"] = c.coupling;
  j["trig_terms"] = c.trig_terms;
  j["gtilde"] = c.gtilde;
  j["ensemble_size"] = c.ensemble_size;
  j["ensemble_sigma"] = c.ensemble_sigma;
  j["ensemble_max_freq"] = c.ensemble_max_freq;
  j["ensemble_member"] = c.ensemble_member;
  j["lambda_grid"] = c.lambda_grid;
  j["lambda_base"] = c.lambda_base;
  j["estimator"] = c.estimator;
  j["sampler"] = c.sampler;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["centers"] = c.centers;
  j["subsample_base"] = c.subsample_base;
  j["transient"] = c.transient;
  j["window_width"] = c.window_width;
  j["window_x"] = c.window_x;
  j["window_z"] = c.window_z;
  j["beta_min"] = c.beta_min;
  j["beta_max"] = c.beta_max;
  j["beta_step"] = c.beta_step;
  j["sweep_d2"] = c.sweep_d2;
  j["n_iters"] = c.n_iters;
  j["renorm_every"] = c.renorm_every;
  j["tol_dimension"] = c.tol_dimension;
  j["tol_exponent"] = c.tol_exponent;
  j["tol_telescoping"] = c.tol_telescoping;
  j["separation_margin"] = c.separation_margin;
  j["dump_samples"] = c.dump_samples;
  j["dump_digits"] = c.dump_digits;
  return j;
}

json estimate_json(const DimensionEstimate& e) {
  json j;
  j["value"] = e.value;
  j["stderr"] = e.slope_stderr;
  j["r_squared"] = e.r_squared;
  j["eps_min"] = e.eps_min;
  j["eps_max"] = e.eps_max;
  j["dropped_scales"] = e.dropped_scales;
  j["degenerate"] = e.degenerate;
  return j;
}

void write_per_scale_csv(const std::filesystem::path& path,
                         const DimensionEstimate& e) {
  std::vector<std::vector<double>> rows;
  for (const ScaleStat& s : e.per_scale)
    rows.push_back({s.epsilon, s.statistic, s.count});
  write_csv(path, "epsilon,statistic,count", rows);
}

Params params_from(const ExperimentConfig& cfg) {
  try {
    return Params(cfg.alpha, cfg.beta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::vector<double> window_scales(const ExperimentConfig& cfg,
                                  const std::string& estimator, int dim) {
  int kmin = cfg.k_min, kmax = cfg.k_max;
  if (kmin == 0 && kmax == 0) std::tie(kmin, kmax) = default_window(estimator, dim);
  if (kmax - kmin + 1 < 4)
    throw ConfigError("config: scale window must span at least 4 dyadic scales");
  return dyadic_scales(kmin, kmax);
}

PointCloud build_cloud(const ExperimentConfig& cfg, const Params& p,
                       const CouplingFunction& g) {
  if (cfg.sampler == "orbit")
    return orbit_cloud(p, g, cfg.samples, cfg.seed, cfg.transient);
  if (cfg.sampler != "pushforward")
    throw ConfigError("config: unknown sampler '" + cfg.sampler + "'");
  CloudOptions opt;
  opt.count = cfg.samples;
  opt.seed = cfg.seed;
  opt.depth = cfg.depth;
  return sample_coupled_cloud(p, g, opt);
}

void dump_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::vector<std::vector<double>> rows;
  rows.reserve(cloud.count());
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    auto pt = cloud.point(i);
    rows.emplace_back(pt.begin(), pt.end());
  }
  write_csv(path, "x,y,z,w", rows);
}

DimensionEstimate run_estimator(const ExperimentConfig& cfg, const PointCloud& cloud,
                                const std::string& estimator,
                                std::vector<double>& scales) {
  scales = window_scales(cfg, estimator, cloud.dim);
  if (estimator == "correlation") {
    CorrelationOptions opts;
    opts.seed = cfg.seed;
    opts.subsample_base = cfg.subsample_base;
    return correlation_dimension(cloud, scales, opts);
  }
  if (estimator == "information") return information_dimension_grid(cloud, scales);
  if (estimator == "box") return box_dimension(cloud, scales);
  if (estimator == "pointwise")
    return averaged_pointwise_dimension(cloud, scales, cfg.centers, cfg.seed).estimate;
  throw ConfigError("config: unknown estimator '" + estimator + "'");
}

/// Closed-form reference for the coupled measure's dimension under the
/// uni-directional theorems: cohomologous or zero couplings keep the product
/// value; otherwise alpha < beta moves it to the Lyapunov dimension.
double dimension_reference(const Params& p, const ExperimentConfig& cfg) {
  const bool exceptional = cfg.coupling == "zero" || cfg.coupling == "cohomologous";
  if (!exceptional && p.alpha < p.beta) return dl_uncoupled_closed_form(p);
  return d1_uncoupled_closed_form(p);
}

// --------------------------------------------------------------------------
// Scenario bodies. Each returns the manifest fragments through the builder.
// --------------------------------------------------------------------------

void scenario_dimension(const ExperimentConfig& cfg,
                        const std::filesystem::path& out, ManifestBuilder& mb,
                        json& extra) {
  const Params p = params_from(cfg);
  const CouplingPtr g = build_coupling(cfg, p);
  const PointCloud cloud = build_cloud(cfg, p, *g);

  std::vector<double> scales;
  const DimensionEstimate est = run_estimator(cfg, cloud, cfg.estimator, scales);
  write_per_scale_csv(out / "per_scale.csv", est);
  mb.artifact("per_scale.csv");

  const double ref = dimension_reference(p, cfg);
  mb.add_verdict("D_" + cfg.estimator, est.value, ref, cfg.tol_dimension,
                 est.slope_stderr);
  mb.add_info("fit", estimate_json(est));
  mb.add_value("d1_closed_form", d1_uncoupled_closed_form(p));
  mb.add_value("dl_closed_form", dl_uncoupled_closed_form(p));

  PlotSeries pts, line;
  pts.label = cfg.estimator;
  for (const ScaleStat& s : est.per_scale) {
    const double ly = cfg.estimator == "information" ? s.statistic
                                                     : std::log(s.statistic);
    pts.points.emplace_back(std::log(s.epsilon), ly);
  }
  line.label = "fit";
  line.line = true;
  line.color = "#d62728";
  if (pts.points.size() >= 2) {
    const double sgn = cfg.estimator == "box" ? -1.0 : 1.0;
    const auto [x0, y0] = pts.points.front();
    for (const auto& [x, y] : pts.points)
      line.points.emplace_back(x, y0 + sgn * est.value * (x - x0));
  }
  write_svg_plot(out / "fit.svg", "dimension fit (" + cfg.estimator + ")",
                 "log eps", "log statistic", {pts, line});
  mb.artifact("fit.svg");

  if (cfg.dump_samples) {
    dump_cloud(out / "samples.csv", cloud);
    mb.artifact("samples.csv");
  }
  extra["provenance"] = cloud.provenance;
}

void scenario_lyapunov(const ExperimentConfig& cfg,
                       const std::filesystem::path& out, ManifestBuilder& mb,
                       json& extra) {
  const Params p = params_from(cfg);
  const CouplingPtr g = build_coupling(cfg, p);

  SplitMix64 rng = stream_rng(cfg.seed, kStreamMisc, 0);
  State4 start{rng.next_unit(), rng.next_unit(), rng.next_unit(), rng.next_unit()};
  const ExponentSpectrum num =
      lyapunov_numerical(p, *g, start, cfg.n_iters, cfg.renorm_every);
  const ExponentSpectrum exact = lyapunov_exact(p);

  for (int i = 0; i < 4; ++i)
    mb.add_verdict("exponent_" + std::to_string(i + 1), num.values[i],
                   exact.values[i], cfg.tol_exponent);
  const DimensionValue dl = kaplan_yorke(num);
  mb.add_verdict("kaplan_yorke", dl.value, dl_uncoupled_closed_form(p), 1e-9);
  extra["j_index"] = dl.j_index;
  extra["restarts"] = num.restarts;
  extra["converged"] = num.converged;
  extra["exponents"] = num.values;

  std::vector<std::vector<double>> rows;
  PlotSeries series[4];
  for (std::size_t h = 0; h < num.convergence_history.size(); ++h) {
    const auto& e = num.convergence_history[h];
    const double n = static_cast<double>((h + 1) * static_cast<std::size_t>(cfg.renorm_every));
    rows.push_back({n, e[0], e[1], e[2], e[3]});
    for (int i = 0; i < 4; ++i) series[i].points.emplace_back(n, e[i]);
  }
  write_csv(out / "convergence.csv", "iteration,chi1,chi2,chi3,chi4", rows);
  mb.artifact("convergence.csv");
  const char* colors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  std::vector<PlotSeries> all;
  for (int i = 0; i < 4; ++i) {
    series[i].line = true;
    series[i].color = colors[i];
    series[i].label = "chi" + std::to_string(i + 1);
    all.push_back(series[i]);
  }
  write_svg_plot(out / "convergence.svg", "running exponent estimates",
                 "iteration", "nats/iter", all);
  mb.artifact("convergence.svg");
}

void scenario_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out,
                    ManifestBuilder& mb, json& extra) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5))
    throw ConfigError("config: sweep needs alpha in (0, 1/2)");
  if (!(cfg.beta_min > 0.0 && cfg.beta_max < 0.5 && cfg.beta_step > 0.0))
    throw ConfigError("config: sweep needs a beta grid inside (0, 1/2)");

  std::vector<std::vector<double>> rows;
  PlotSeries d1s, dls;
  bool rowwise_ok = true;
  double max_violation = 0.0;
  for (double b = cfg.beta_min; b <= cfg.beta_max + 1e-15; b += cfg.beta_step) {
    const Params p(cfg.alpha, std::min(b, 0.5 - 1e-12));
    const double d1 = d1_uncoupled_closed_form(p);
    const double dl = dl_uncoupled_closed_form(p);
    std::vector<double> row{p.beta, d1, dl};
    if (cfg.sweep_d2) {
      CloudOptions opt;
      opt.count = cfg.samples;
      opt.seed = cfg.seed;
      const PointCloud cloud = sample_uncoupled_cloud(p, opt);
      std::vector<double> scales;
      const DimensionEstimate est = run_estimator(cfg, cloud, "correlation", scales);
      row.push_back(est.value);
      row.push_back(est.slope_stderr);
    }
    rows.push_back(row);
    d1s.points.emplace_back(p.beta, d1);
    dls.points.emplace_back(p.beta, dl);
    if (d1 > dl + 1e-12) {
      rowwise_ok = false;
      max_violation = std::max(max_violation, d1 - dl);
    }
  }
  write_csv(out / "sweep.csv",
            cfg.sweep_d2 ? "beta,d1,dl,d2_hat,d2_stderr" : "beta,d1,dl", rows);
  mb.artifact("sweep.csv");

  d1s.line = true;
  d1s.label = "D1";
  d1s.color = "#1f77b4";
  dls.line = true;
  dls.label = "DL";
  dls.color = "#d62728";
  write_svg_plot(out / "sweep.svg", "dimensions vs beta", "beta", "dimension",
                 {d1s, dls});
  mb.artifact("sweep.svg");

  mb.add_bound("rowwise_d1_minus_dl_max", max_violation, 1e-12, true);
  extra["rowwise_d1_le_dl"] = rowwise_ok;

  // Tangency at beta = alpha and branch seam continuity at beta = 1/4,
  // reported on the nearest grid rows.
  double best = 1e9, best_d = 0.0;
  for (const auto& row : rows)
    if (std::abs(row[0] - cfg.alpha) < best) {
      best = std::abs(row[0] - cfg.alpha);
      best_d = row[2] - row[1];
    }
  if (best < cfg.beta_step) mb.add_verdict("tangency_gap_at_alpha", best_d, 0.0, 1e-9);
  if (cfg.beta_min < 0.25 && cfg.beta_max > 0.25) {
    const Params pl(cfg.alpha, 0.25 - 1e-12);
    const Params pr(cfg.alpha, 0.25 + 1e-12);
    mb.add_verdict("dl_seam_jump", dl_uncoupled_closed_form(pr) -
                                        dl_uncoupled_closed_form(pl),
                   0.0, 1e-10);
  }
}

void scenario_cross_section(const ExperimentConfig& cfg,
                            const std::filesystem::path& out, ManifestBuilder& mb,
                            json& extra) {
  const Params p = params_from(cfg);
  const CouplingPtr g = build_coupling(cfg, p);
  const CouplingPtr zero = make_zero_coupling();

  const double half = 0.5 * cfg.window_width;
  const auto in_window = [&](double x, double z) {
    return x >= cfg.window_x - half && x < cfg.window_x + half &&
           z >= cfg.window_z - half && z < cfg.window_z + half;
  };

  const auto slice = [&](const CouplingFunction& gc, const std::string& name) {
    CloudOptions opt;
    opt.count = cfg.samples;
    opt.seed = cfg.seed;
    opt.depth = cfg.depth;
    const PointCloud cloud = sample_coupled_cloud(p, gc, opt);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < cloud.count(); ++i) {
      const auto pt = cloud.point(i);
      if (in_window(pt[0], pt[2])) rows.push_back({pt[1], pt[3]});
    }
    write_csv(out / (name + ".csv"), "y,w", rows);
    mb.artifact(name + ".csv");
    PlotSeries s;
    for (const auto& r : rows) s.points.emplace_back(r[0], r[1]);
    s.color = "#1f77b4";
    write_svg_plot(out / (name + ".svg"), "(y,w) cross-section: " + name, "y",
                   "w", {s});
    mb.artifact(name + ".svg");
    return rows;
  };

  const auto coupled = slice(*g, "coupled");
  const auto uncoupled = slice(*zero, "uncoupled");
  if (coupled.size() < 500)
    mb.warn("cross-section window too small: only " +
            std::to_string(coupled.size()) +
            " coupled points survived; enlarge window_width");

  // Conditional spread: occupied w-cells at 2^-6 inside the densest y-cell.
  const auto w_cells_in_densest_y_cell = [](const std::vector<std::vector<double>>& rows) {
    const double eps = 1.0 / 64.0;
    std::map<int64_t, std::set<int64_t>> by_y;
    std::map<int64_t, std::size_t> y_count;
    for (const auto& r : rows) {
      const int64_t yc = static_cast<int64_t>(std::floor(r[0] / eps));
      const int64_t wc = static_cast<int64_t>(std::floor(r[1] / eps));
      by_y[yc].insert(wc);
      y_count[yc]++;
    }
    int64_t best = 0;
    std::size_t best_n = 0;
    for (const auto& [yc, n] : y_count)
      if (n > best_n) {
        best_n = n;
        best = yc;
      }
    return best_n ? by_y[best].size() : 0;
  };

  const double coupled_cells =
      static_cast<double>(w_cells_in_densest_y_cell(coupled));
  mb.add_bound("coupled_w_cells_in_densest_y_cell", coupled_cells, 9.5, false);
  extra["uncoupled_w_cells_in_densest_y_cell"] =
      w_cells_in_densest_y_cell(uncoupled);
  extra["coupled_points_in_window"] = coupled.size();
}

void scenario_prevalence(const ExperimentConfig& cfg,
                         const std::filesystem::path& out, ManifestBuilder& mb,
                         json& extra) {
  const Params p = params_from(cfg);
  if (!(p.alpha < p.beta))
    throw ConfigError("config: prevalence probe requires alpha < beta");
  if (cfg.ensemble_size < 10)
    throw ConfigError("config: prevalence probe requires ensemble_size >= 10");

  const double dl = dl_uncoupled_closed_form(p);
  extra["ensemble_law"] = kEnsembleLaw;

  std::vector<std::vector<double>> member_rows;
  PlotSeries member_pts;
  int within = 0;
  json members = json::array();
  for (int m = 0; m < cfg.ensemble_size; ++m) {
    const CouplingPtr g =
        draw_trig_coupling(cfg.seed, static_cast<uint64_t>(m + 1),
                           cfg.ensemble_sigma, cfg.ensemble_max_freq);
    CloudOptions opt;
    opt.count = cfg.samples;
    opt.seed = cfg.seed + static_cast<uint64_t>(m + 1);
    const PointCloud cloud = sample_coupled_cloud(p, *g, opt);
    std::vector<double> scales;
    DimensionEstimate est;
    bool failed = false;
    try {
      est = run_estimator(cfg, cloud, "correlation", scales);
    } catch (const std::exception& e) {
      failed = true;
      mb.warn("member " + std::to_string(m) + " estimation failed: " + e.what());
    }
    const bool pass = !failed && !est.degenerate &&
                      std::abs(est.value - dl) <= cfg.tol_dimension;
    if (pass) ++within;
    member_rows.push_back({static_cast<double>(m), est.value, est.slope_stderr,
                           est.r_squared, pass ? 1.0 : 0.0});
    member_pts.points.emplace_back(static_cast<double>(m), est.value);
    json row = estimate_json(est);
    row["member"] = m;
    row["coupling"] = g->describe();
    row["pass"] = pass;
    members.push_back(row);
  }
  write_csv(out / "members.csv", "member,d2_hat,stderr,r_squared,pass", member_rows);
  mb.artifact("members.csv");
  extra["members"] = members;

  const double fraction =
      static_cast<double>(within) / static_cast<double>(cfg.ensemble_size);
  mb.add_value("dl_reference", dl);
  mb.add_bound("fraction_within_tolerance", fraction, 0.9 - 1e-12, false);

  // Probe line g_base + lambda * p through the configured base coupling.
  CouplingPtr base;
  if (cfg.lambda_base == "zero")
    base = make_zero_coupling();
  else if (cfg.lambda_base == "cohomologous")
    base = make_cohomologous_coupling(p, make_sine_squared_tanh());
  else if (cfg.lambda_base == "coupling")
    base = build_coupling(cfg, p);
  else
    throw ConfigError("config: unknown lambda_base '" + cfg.lambda_base + "'");

  const CouplingPtr probe = make_probe_coupling();
  std::vector<std::vector<double>> lambda_rows;
  for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
    const double lam = cfg.lambda_grid[li];
    const CouplingPtr g = lam == 0.0
                              ? base
                              : add_coupling(base, scale_coupling(lam, probe));
    CloudOptions opt;
    opt.count = cfg.samples;
    opt.seed = cfg.seed + 7700 + li;
    const PointCloud cloud = sample_coupled_cloud(p, *g, opt);
    std::vector<double> scales;
    const DimensionEstimate est = run_estimator(cfg, cloud, "correlation", scales);
    lambda_rows.push_back({lam, est.value, est.slope_stderr, est.r_squared});
  }
  write_csv(out / "lambda_probe.csv", "lambda,d2_hat,stderr,r_squared", lambda_rows);
  mb.artifact("lambda_probe.csv");

  member_pts.label = "members";
  PlotSeries ref_line;
  ref_line.line = true;
  ref_line.color = "#d62728";
  ref_line.label = "DL";
  ref_line.points.emplace_back(0.0, dl);
  ref_line.points.emplace_back(static_cast<double>(cfg.ensemble_size - 1), dl);
  write_svg_plot(out / "members.svg", "ensemble correlation dimensions", "member",
                 "D2", {member_pts, ref_line});
  mb.artifact("members.svg");
}

void scenario_counterexample(const ExperimentConfig& cfg,
                             const std::filesystem::path& out, ManifestBuilder& mb,
                             json& extra) {
  const Params p = params_from(cfg);
  if (!(p.alpha < p.beta))
    throw ConfigError("config: counterexample requires alpha < beta");

  const CouplingPtr gtilde = make_sine_squared_tanh();
  const CouplingPtr g = make_cohomologous_coupling(p, gtilde);
  const int depth =
      cfg.depth > 0 ? cfg.depth : default_truncation_depth(p, *g, 1e-12);

  // Telescoping certificate: the conjugacy's w-shift must equal
  // gtilde(x,y) up to the geometric tail.
  double max_residual = 0.0;
  const int probes = 1000;
  for (int i = 0; i < probes; ++i) {
    SplitMix64 rng = stream_rng(cfg.seed, kStreamMisc, static_cast<uint64_t>(i));
    const MeasureSample s = sample_uncoupled_measure(
        p, rng, depth + cantor_resolution_digits(p.alpha));
    const ConjugacyResult r = conjugacy_map(p, *g, s, depth);
    const double residual =
        std::abs((r.image.w - s.v.w) - gtilde->eval(s.v.x, s.v.y));
    max_residual = std::max(max_residual, residual);
  }
  mb.add_bound("telescoping_residual_max", max_residual, cfg.tol_telescoping, true);
  extra["truncation_depth"] = depth;

  CloudOptions opt;
  opt.count = cfg.samples;
  opt.seed = cfg.seed;
  opt.depth = depth;
  const PointCloud cloud = sample_coupled_cloud(p, *g, opt);
  std::vector<double> scales;
  const DimensionEstimate est = run_estimator(cfg, cloud, "correlation", scales);
  write_per_scale_csv(out / "per_scale.csv", est);
  mb.artifact("per_scale.csv");

  const double d1 = d1_uncoupled_closed_form(p);
  const double dl = dl_uncoupled_closed_form(p);
  mb.add_verdict("D_correlation", est.value, d1, cfg.tol_dimension,
                 est.slope_stderr);
  mb.add_bound("D_correlation_below_dl", est.value, dl - cfg.separation_margin,
               true, est.slope_stderr);
  mb.add_value("d1_closed_form", d1);
  mb.add_value("dl_closed_form", dl);
  mb.add_info("fit", estimate_json(est));
}

}  // namespace

RunResult run_scenario(const ExperimentConfig& cfg,
                       const std::filesystem::path& out_dir) {
  static const std::set<std::string> scenarios = {
      "cross-section", "sweep", "prevalence", "counterexample", "lyapunov",
      "dimension"};
  if (!scenarios.count(cfg.scenario))
    throw ConfigError("config: unknown scenario '" + cfg.scenario + "'");

  std::filesystem::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();

  ManifestBuilder mb;
  json extra;
  if (cfg.scenario == "dimension")
    scenario_dimension(cfg, out_dir, mb, extra);
  else if (cfg.scenario == "lyapunov")
    scenario_lyapunov(cfg, out_dir, mb, extra);
  else if (cfg.scenario == "sweep")
    scenario_sweep(cfg, out_dir, mb, extra);
  else if (cfg.scenario == "cross-section")
    scenario_cross_section(cfg, out_dir, mb, extra);
  else if (cfg.scenario == "prevalence")
    scenario_prevalence(cfg, out_dir, mb, extra);
  else if (cfg.scenario == "counterexample")
    scenario_counterexample(cfg, out_dir, mb, extra);

  const auto t1 = std::chrono::steady_clock::now();

  RunResult rr;
  rr.manifest["schema_version"] = 1;
  rr.manifest["scenario"] = cfg.scenario;
  rr.manifest["config"] = config_echo(cfg);
  rr.manifest["results"] = mb.results;
  rr.manifest["details"] = extra;
  rr.manifest["warnings"] = mb.warnings;
  rr.manifest["artifacts"] = mb.artifacts;
  rr.manifest["all_pass"] = mb.all_pass;
  rr.manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();

  std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
  mf << rr.manifest.dump(2) << "\n";

  rr.exit_code = mb.all_pass ? 0 : 2;
  return rr;
}

}  // namespace bakerdim
