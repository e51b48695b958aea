#include "bakerdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "bakerdim/linfit.hpp"
#include "bakerdim/parallel.hpp"

namespace bakerdim {

void fill_fair_bits(SplitMix64& rng, uint8_t* out, int n) {
  int i = 0;
  while (i < n) {
    uint64_t word = rng.next();
    const int take = std::min(64, n - i);
    for (int b = 0; b < take; ++b) out[i + b] = static_cast<uint8_t>((word >> b) & 1u);
    i += take;
  }
}

double SplitMix64::next_gaussian() {
  // next_unit() is in [0,1); shift to (0,1] before the log.
  const double u = 1.0 - next_unit();
  const double v = next_unit();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

double cantor_value(double contraction, std::span<const uint8_t> digits) {
  double t = 0.0;
  for (std::size_t i = digits.size(); i-- > 0;)
    t = contraction * t + (1.0 - contraction) * static_cast<double>(digits[i]);
  return t;
}

CantorPoint sample_cantor(double contraction, SplitMix64& rng, int depth) {
  if (depth < 1) throw std::invalid_argument("sample_cantor: depth must be >= 1");
  CantorPoint c;
  c.digits.resize(static_cast<std::size_t>(depth));
  fill_fair_bits(rng, c.digits.data(), depth);
  c.value = cantor_value(contraction, c.digits);
  return c;
}

int cantor_resolution_digits(double contraction) {
  // contraction^n <= 1e-17
  const double n = std::ceil(-std::log(1e-17) / -std::log(contraction));
  return static_cast<int>(std::clamp(n, 4.0, 2000.0));
}

PastHistory past_history(const Params& p, State2 s, int n) {
  PastHistory h;
  h.states.reserve(static_cast<std::size_t>(n));
  State2 cur = s;
  for (int i = 1; i <= n; ++i) {
    if (!on_inverse_slab(p.alpha, cur.y)) {
      h.escape_index = i;
      return h;
    }
    cur = baker_inverse(p, cur);
    h.states.push_back(cur);
  }
  return h;
}

MeasureSample sample_uncoupled_measure(const Params& p, SplitMix64& rng, int depth) {
  MeasureSample s;
  s.v.x = rng.next_unit();
  s.v.z = rng.next_unit();
  s.y_digits.resize(static_cast<std::size_t>(depth));
  fill_fair_bits(rng, s.y_digits.data(), depth);
  const int wdepth = cantor_resolution_digits(p.beta);
  s.w_digits.resize(static_cast<std::size_t>(wdepth));
  fill_fair_bits(rng, s.w_digits.data(), wdepth);
  s.v.y = cantor_value(p.alpha, s.y_digits);
  s.v.w = cantor_value(p.beta, s.w_digits);
  return s;
}

int default_truncation_depth(const Params& p, const CouplingFunction& g, double tol) {
  const double sup = std::max(g.sup_norm(), 1e-300);
  // |g| beta^N / (1-beta) <= tol
  const double n = std::ceil(std::log(tol * (1.0 - p.beta) / sup) / std::log(p.beta));
  return static_cast<int>(std::clamp(n, 1.0, 2000.0));
}

namespace {

// Suffix Cantor values: ysuf[n] = (1-a) sum_j a^j d[n+j], so ysuf[n] is
// y_{-n} on the attractor and ysuf[0] reproduces y itself.
void y_suffix_values(double alpha, std::span<const uint8_t> digits,
                     std::vector<double>& ysuf) {
  const std::size_t d = digits.size();
  ysuf.resize(d + 1);
  ysuf[d] = 0.0;
  for (std::size_t i = d; i-- > 0;)
    ysuf[i] = alpha * ysuf[i + 1] + (1.0 - alpha) * static_cast<double>(digits[i]);
}

double series_from_suffixes(const Params& p, const CouplingFunction& g, double x,
                            std::span<const uint8_t> digits,
                            std::span<const double> ysuf, int depth) {
  const int n = std::min<int>(depth, static_cast<int>(digits.size()) - 1);
  double sum = 0.0;
  double bp = 1.0;
  double xm = x;
  for (int i = 0; i < n; ++i) {
    // x_{-i-1} = (x_{-i} + digit_i) / 2; the digit is the branch choice.
    xm = 0.5 * (xm + static_cast<double>(digits[static_cast<std::size_t>(i)]));
    sum += bp * g.eval(xm, ysuf[static_cast<std::size_t>(i) + 1]);
    bp *= p.beta;
  }
  return sum;
}

}  // namespace

double conjugacy_series(const Params& p, const CouplingFunction& g, double x,
                        std::span<const uint8_t> y_digits, int depth) {
  if (g.is_zero()) return 0.0;
  std::vector<double> ysuf;
  y_suffix_values(p.alpha, y_digits, ysuf);
  return series_from_suffixes(p, g, x, y_digits, ysuf, depth);
}

ConjugacyResult conjugacy_map(const Params& p, const CouplingFunction& g,
                              const MeasureSample& s, int depth, int sign) {
  ConjugacyResult r;
  r.truncation_depth = std::min<int>(depth, static_cast<int>(s.y_digits.size()) - 1);
  r.tail_bound = g.sup_norm() * std::pow(p.beta, r.truncation_depth) / (1.0 - p.beta);
  const double series = conjugacy_series(p, g, s.v.x, s.y_digits, depth);
  r.image = s.v;
  r.image.w = sign >= 0 ? s.v.w + series : s.v.w - series;
  return r;
}

MeasureSample sample_coupled_measure(const Params& p, const CouplingFunction& g,
                                     SplitMix64& rng, int depth) {
  MeasureSample s = sample_uncoupled_measure(p, rng, depth + cantor_resolution_digits(p.alpha));
  s.v = conjugacy_map(p, g, s, depth).image;
  return s;
}

namespace {

struct SampleScratch {
  std::vector<uint8_t> ydig;
  std::vector<uint8_t> wdig;
  std::vector<double> ysuf;
};

// One pushforward sample, written straight into the cloud slot.
void coupled_sample_into(const Params& p, const CouplingFunction& g, uint64_t seed,
                         uint64_t index, int series_depth, int ydigits, int wdigits,
                         SampleScratch& ws, double* out) {
  SplitMix64 rng = stream_rng(seed, kStreamSample, index);
  const double x = rng.next_unit();
  const double z = rng.next_unit();
  ws.ydig.resize(static_cast<std::size_t>(ydigits));
  fill_fair_bits(rng, ws.ydig.data(), ydigits);
  ws.wdig.resize(static_cast<std::size_t>(wdigits));
  fill_fair_bits(rng, ws.wdig.data(), wdigits);
  y_suffix_values(p.alpha, ws.ydig, ws.ysuf);
  const double y = ws.ysuf[0];
  const double w = cantor_value(p.beta, ws.wdig);
  const double shift =
      g.is_zero() ? 0.0 : series_from_suffixes(p, g, x, ws.ydig, ws.ysuf, series_depth);
  out[0] = x;
  out[1] = y;
  out[2] = z;
  out[3] = w + shift;
}

}  // namespace

PointCloud sample_coupled_cloud(const Params& p, const CouplingFunction& g,
                                const CloudOptions& opt) {
  const int series_depth =
      opt.depth > 0 ? opt.depth : default_truncation_depth(p, g, opt.tol);
  const int ydigits =
      std::min(series_depth + cantor_resolution_digits(p.alpha), 4096);
  const int wdigits = cantor_resolution_digits(p.beta);

  PointCloud cloud;
  cloud.dim = 4;
  cloud.coords.resize(opt.count * 4);
  cloud.seed = opt.seed;
  cloud.provenance = "pushforward(" + g.describe() + ")";
  parallel_chunks(opt.count, [&](std::size_t b, std::size_t e) {
    SampleScratch ws;
    for (std::size_t i = b; i < e; ++i)
      coupled_sample_into(p, g, opt.seed, i, series_depth, ydigits, wdigits, ws,
                          cloud.coords.data() + i * 4);
  });
  return cloud;
}

PointCloud sample_uncoupled_cloud(const Params& p, const CloudOptions& opt) {
  CouplingPtr zero = make_zero_coupling();
  PointCloud cloud = sample_coupled_cloud(p, *zero, opt);
  cloud.provenance = "product-measure";
  return cloud;
}

OrbitWalker::OrbitWalker(const Params& p, const CouplingFunction& g,
                         SplitMix64 rng)
    : alpha_(p.alpha), beta_(p.beta), g_(&g), bits_(rng) {
  const AbsorbingBounds box = absorbing_bounds(p, g, 0.0);
  wx_ = bits_.next();
  wz_ = bits_.next();
  y_ = bits_.next_unit();
  w_ = box.w.lo + (box.w.hi - box.w.lo) * bits_.next_unit();
}

OrbitWalker::OrbitWalker(const Params& p, const CouplingFunction& g,
                         const State4& start, uint64_t bit_seed)
    : alpha_(p.alpha), beta_(p.beta), g_(&g), bits_(0) {
  uint64_t h = mix64(bit_seed);
  for (double v : {start.x, start.y, start.z, start.w}) {
    uint64_t bitsrep;
    std::memcpy(&bitsrep, &v, sizeof(bitsrep));
    h = mix64(h ^ bitsrep);
  }
  bits_ = SplitMix64(h);
  // the window keeps the start's leading 53 binary digits; the rest are fresh
  wx_ = (static_cast<uint64_t>(std::ldexp(start.x, 53)) << 11) |
        (bits_.next() & 0x7FFu);
  wz_ = (static_cast<uint64_t>(std::ldexp(start.z, 53)) << 11) |
        (bits_.next() & 0x7FFu);
  y_ = start.y;
  w_ = start.w;
}

State4 OrbitWalker::state() const {
  return {std::ldexp(static_cast<double>(wx_ >> 11), -53), y_,
          std::ldexp(static_cast<double>(wz_ >> 11), -53), w_};
}

bool OrbitWalker::next_bit() {
  if (reservoir_bits_ == 0) {
    reservoir_ = bits_.next();
    reservoir_bits_ = 64;
  }
  const bool b = reservoir_ & 1u;
  reservoir_ >>= 1;
  --reservoir_bits_;
  return b;
}

void OrbitWalker::advance() {
  const State4 s = state();
  const double gv = g_->is_zero() ? 0.0 : g_->eval(s.x, s.y);
  const double bx = static_cast<double>(wx_ >> 63);
  const double bz = static_cast<double>(wz_ >> 63);
  y_ = alpha_ * y_ + (1.0 - alpha_) * bx;
  w_ = beta_ * w_ + (1.0 - beta_) * bz + gv;
  wx_ = (wx_ << 1) | static_cast<uint64_t>(next_bit());
  wz_ = (wz_ << 1) | static_cast<uint64_t>(next_bit());
}

PointCloud orbit_cloud(const Params& p, const CouplingFunction& g,
                       std::size_t count, uint64_t seed, int transient) {
  constexpr std::size_t kSegment = 65536;
  const std::size_t nseg = (count + kSegment - 1) / kSegment;
  PointCloud cloud;
  cloud.dim = 4;
  cloud.coords.resize(count * 4);
  cloud.seed = seed;
  cloud.provenance = "orbit(" + g.describe() + ")";
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long s = 0; s < static_cast<long long>(nseg); ++s) {
    OrbitWalker walker(p, g, stream_rng(seed, kStreamOrbit, static_cast<uint64_t>(s)));
    for (int i = 0; i < transient; ++i) walker.advance();
    const std::size_t b = static_cast<std::size_t>(s) * kSegment;
    const std::size_t e = std::min(b + kSegment, count);
    for (std::size_t i = b; i < e; ++i) {
      const State4 v = walker.state();
      double* out = cloud.coords.data() + i * 4;
      out[0] = v.x;
      out[1] = v.y;
      out[2] = v.z;
      out[3] = v.w;
      walker.advance();
    }
  }
  return cloud;
}

PointCloud cantor_cloud(double contraction, std::size_t count, uint64_t seed) {
  const int depth = cantor_resolution_digits(contraction);
  PointCloud cloud;
  cloud.dim = 1;
  cloud.coords.resize(count);
  cloud.seed = seed;
  cloud.provenance = "cantor";
  parallel_chunks(count, [&](std::size_t b, std::size_t e) {
    std::vector<uint8_t> digits(static_cast<std::size_t>(depth));
    for (std::size_t i = b; i < e; ++i) {
      SplitMix64 rng = stream_rng(seed, kStreamSample, i);
      fill_fair_bits(rng, digits.data(), depth);
      cloud.coords[i] = cantor_value(contraction, digits);
    }
  });
  return cloud;
}

int modulus_scales_for_decades(double alpha, double decades) {
  return static_cast<int>(std::ceil(decades * std::log(10.0) / -std::log(alpha))) + 1;
}

ModulusResult empirical_modulus(const Params& p, const CouplingFunction& g,
                                int pairs_per_scale, int k_min, int n_scales,
                                double rho_test, uint64_t seed) {
  ModulusResult res;
  res.rho_test = rho_test;
  res.scales.resize(static_cast<std::size_t>(n_scales));

  const int series_depth = default_truncation_depth(p, g, 1e-13);
  const int k_max = k_min + n_scales - 1;
  const int digits =
      std::min(std::max(series_depth, k_max + 1) + cantor_resolution_digits(p.alpha), 4096);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int s = 0; s < n_scales; ++s) {
    const int k = k_min + s;
    ModulusScale row;
    row.k = k;
    std::vector<uint8_t> da(static_cast<std::size_t>(digits)),
        db(static_cast<std::size_t>(digits));
    std::vector<double> sa, sb;
    for (int j = 0; j < pairs_per_scale; ++j) {
      SplitMix64 rng = stream_rng(seed, kStreamModulus,
                                  static_cast<uint64_t>(s) * 1000003u +
                                      static_cast<uint64_t>(j));
      const double x = rng.next_unit();
      fill_fair_bits(rng, da.data(), digits);
      std::copy(da.begin(), da.begin() + k, db.begin());
      db[static_cast<std::size_t>(k)] = static_cast<uint8_t>(1 - da[static_cast<std::size_t>(k)]);
      fill_fair_bits(rng, db.data() + k + 1, digits - k - 1);

      y_suffix_values(p.alpha, da, sa);
      y_suffix_values(p.alpha, db, sb);
      const double dy = std::abs(sa[0] - sb[0]);
      if (dy == 0.0) continue;  // degenerate pair
      const double ha = series_from_suffixes(p, g, x, da, sa, series_depth);
      const double hb = series_from_suffixes(p, g, x, db, sb, series_depth);
      const double dh = std::abs(ha - hb);
      row.pairs++;
      const double ratio = dh / std::pow(dy, rho_test);
      if (ratio > row.max_ratio) row.max_ratio = ratio;
      if (dh > row.dh_at_max) {
        row.dh_at_max = dh;
        row.dy_at_max = dy;
      }
    }
    res.scales[static_cast<std::size_t>(s)] = row;
  }

  std::vector<double> lx, ly;
  for (const ModulusScale& row : res.scales)
    if (row.dh_at_max > 0.0 && row.dy_at_max > 0.0) {
      lx.push_back(std::log(row.dy_at_max));
      ly.push_back(std::log(row.dh_at_max));
    }
  if (lx.size() < 2) {
    res.degenerate = true;
    return res;
  }
  const LineFit fit = fit_line(lx, ly);
  res.fitted_slope = fit.slope;
  res.slope_stderr = fit.slope_stderr;
  return res;
}

}  // namespace bakerdim
