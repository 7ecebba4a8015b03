#include "pdolab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "pdolab/op.hpp"

namespace pdolab {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One RNG stream per (depth, trial) cell, independent of evaluation order.
std::uint64_t stream_seed(std::uint64_t seed, int depth, long long trial) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (static_cast<std::uint64_t>(depth) * 0x9E3779B97F4A7C15ull));
  s = splitmix64(s ^ (static_cast<std::uint64_t>(trial + 2) * 0xC2B2AE3D27D4EB4Full));
  return s;
}

double codomain_norm(const GridFunction& Au, const LPPartition& P,
                     const ExperimentConfig& cfg) {
  switch (cfg.codomain) {
    case Codomain::Lp:
      return lp_norm(Au, cfg.space.p);
    case Codomain::SameSpace:
      return space_norm(Au, P, cfg.space);
    case Codomain::Shifted: {
      SpaceParams sp = cfg.space;
      sp.s -= cfg.symbol.d;
      return space_norm(Au, P, sp);
    }
  }
  throw std::logic_error("unhandled codomain");
}

// Draws until the domain norm is nonzero (complex-Gaussian draws are zero
// with probability zero, but the contract promises rejection).
GridFunction draw_input(const TorusGrid& g, const LPPartition& P,
                        const SpaceParams& dom, std::uint64_t stream,
                        double& norm_out) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    GridFunction u = random_input(g, stream);
    const double dn = space_norm(u, P, dom);
    if (dn > 0.0) {
      norm_out = dn;
      return u;
    }
    stream = splitmix64(stream ^ 0xD1B54A32D192ED03ull);
  }
  throw std::runtime_error("could not draw an input with nonzero norm");
}

void append_summary(RatioTable& t, int depth, std::size_t row_begin) {
  std::vector<double> r;
  for (std::size_t i = row_begin; i < t.rows.size(); ++i)
    r.push_back(t.rows[i].ratio);
  if (r.empty()) return;
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  const double median =
      n % 2 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
  t.summary.push_back({depth, r.back(), median});
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.depths.empty())
    throw std::invalid_argument("config lists no depths");
  if (cfg.trials < 1)
    throw std::invalid_argument("trials must be at least 1");
  for (int J : cfg.depths) (void)make_grid(cfg.dim, J);  // bounds check
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::invalid_argument("config value for '" + key +
                                "' is not a number: " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::invalid_argument("config value for '" + key +
                                "' is not an integer: " + v);
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::pair<int, int> resolve_blocks(const SymbolSpec& spec, const TorusGrid& g) {
  const int hi = spec.block_hi > 0 ? spec.block_hi : g.depth() - 3;
  if (spec.block_lo > hi)
    throw std::invalid_argument("lacunary block range is empty at depth " +
                                std::to_string(g.depth()));
  return {spec.block_lo, hi};
}

Symbol build_symbol(const SymbolSpec& spec, const TorusGrid& g) {
  switch (spec.kind) {
    case SymbolSpec::Kind::Ching: {
      const auto [lo, hi] = resolve_blocks(spec, g);
      std::vector<double> coeffs;
      if (spec.d != 0.0) {
        coeffs.resize(static_cast<std::size_t>(hi - lo + 1));
        for (int j = lo; j <= hi; ++j)
          coeffs[static_cast<std::size_t>(j - lo)] = std::pow(2.0, j * spec.d);
      }
      Symbol a = ching_symbol(g, spec.r, lo, hi, coeffs);
      a.order = spec.d;
      return a;
    }
    case SymbolSpec::Kind::Multiplier:
      return bracket_symbol(g, spec.d);
    case SymbolSpec::Kind::CustomFile: {
      Symbol a = load_symbol(spec.path);
      if (!(a.grid == g))
        throw std::invalid_argument(
            "symbol file does not match the requested dim/depth");
      return a;
    }
  }
  throw std::logic_error("unhandled symbol kind");
}

GridFunction random_input(const TorusGrid& g, std::uint64_t stream) {
  std::mt19937_64 rng(stream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralFunction s{g, std::vector<cplx>(g.lattice_size())};
  const double band2 = std::pow(g.extent() / 4.0, 2);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const Freq f = g.freq(i);
    if (double(f.k1) * f.k1 + double(f.k2) * f.k2 <= band2) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      s.coeffs[i] = cplx(re, im);
    }
  }
  return inverse_fourier(s);
}

GridFunction lacunary_input(const TorusGrid& g, int block_lo, int count,
                            double d) {
  if (count < 1) throw std::invalid_argument("lacunary input needs count >= 1");
  SpectralFunction s{g, std::vector<cplx>(g.lattice_size())};
  for (int i = 0; i < count; ++i) {
    const int j = block_lo + i;
    if (j < 0 || j > 30)
      throw std::invalid_argument("lacunary block index out of range");
    const Freq f{1 << j, 0};
    if (!g.in_lattice(f))
      throw std::invalid_argument("lacunary mode 2^" + std::to_string(j) +
                                  " leaves the lattice at depth " +
                                  std::to_string(g.depth()));
    s.coeffs[g.index(f)] = std::pow(2.0, -d * j);
  }
  return inverse_fourier(s);
}

// --- tables ---

std::string RatioTable::csv() const {
  std::string out = "experiment,depth,blocks,trial,input_norm,output_norm,ratio\n";
  for (const RatioRow& r : rows) {
    out += experiment;
    out += ',';
    out += std::to_string(r.depth);
    out += ',';
    out += std::to_string(r.blocks);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += fmt17(r.input_norm);
    out += ',';
    out += fmt17(r.output_norm);
    out += ',';
    out += fmt17(r.ratio);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json RatioTable::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["rng"] = rng;
  j["seed"] = seed;
  j["meta"] = meta;
  j["rows"] = nlohmann::ordered_json::array();
  for (const RatioRow& r : rows) {
    nlohmann::ordered_json row;
    row["depth"] = r.depth;
    row["blocks"] = r.blocks;
    row["trial"] = r.trial;
    row["input_norm"] = r.input_norm;
    row["output_norm"] = r.output_norm;
    row["ratio"] = r.ratio;
    j["rows"].push_back(std::move(row));
  }
  j["summary"] = nlohmann::ordered_json::array();
  for (const RatioSummary& s : summary) {
    nlohmann::ordered_json row;
    row["depth"] = s.depth;
    row["max_ratio"] = s.max_ratio;
    row["median_ratio"] = s.median_ratio;
    j["summary"].push_back(std::move(row));
  }
  return j;
}

std::string GrowthTable::csv() const {
  std::string out =
      "experiment,depth,block_count,block_lo,block_hi,operator_norm,"
      "bounded_ratio\n";
  for (const GrowthRow& r : rows) {
    out += experiment;
    out += ',';
    out += std::to_string(depth);
    out += ',';
    out += std::to_string(r.block_count);
    out += ',';
    out += std::to_string(r.block_lo);
    out += ',';
    out += std::to_string(r.block_hi);
    out += ',';
    out += fmt17(r.operator_norm);
    out += ',';
    out += fmt17(r.bounded_ratio);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json GrowthTable::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["rng"] = rng;
  j["seed"] = seed;
  j["depth"] = depth;
  j["meta"] = meta;
  j["rows"] = nlohmann::ordered_json::array();
  for (const GrowthRow& r : rows) {
    nlohmann::ordered_json row;
    row["block_count"] = r.block_count;
    row["block_lo"] = r.block_lo;
    row["block_hi"] = r.block_hi;
    row["operator_norm"] = r.operator_norm;
    row["bounded_ratio"] = r.bounded_ratio;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

// --- experiments ---

RatioTable boundedness_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  RatioTable t;
  t.experiment = "boundedness";
  t.seed = cfg.seed;
  t.meta["dim"] = cfg.dim;
  t.meta["trials"] = cfg.trials;
  t.meta["coeff_law"] = "std::normal_distribution<double>(0,1)";
  for (int J : cfg.depths) {
    const TorusGrid g = make_grid(cfg.dim, J);
    const LPPartition P = build_partition(g);
    const Symbol a = build_symbol(cfg.symbol, g);
    const auto [lo, hi] = resolve_blocks(cfg.symbol, g);
    const int total = hi - lo + 1;
    const int sym_blocks =
        cfg.symbol.kind == SymbolSpec::Kind::Ching ? total : 0;
    const std::size_t row0 = t.rows.size();
    for (long long trial = 0; trial < cfg.trials; ++trial) {
      double dn = 0.0;
      const GridFunction u =
          draw_input(g, P, cfg.space, stream_seed(cfg.seed, J, trial), dn);
      const GridFunction Au = apply_direct(a, u);
      const double on = codomain_norm(Au, P, cfg);
      t.rows.push_back({J, sym_blocks, trial, dn, on, on / dn});
    }
    {
      const GridFunction u = lacunary_input(g, lo, total, cfg.symbol.d);
      const double dn = space_norm(u, P, cfg.space);
      const GridFunction Au = apply_direct(a, u);
      const double on = codomain_norm(Au, P, cfg);
      t.rows.push_back({J, total, -1, dn, on, on / dn});
    }
    append_summary(t, J, row0);
  }
  return t;
}

RatioTable sharpness_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (!(cfg.space.q >= 1.0))
    throw std::invalid_argument(
        "sharpness requires q >= 1 (q = 1 is the bounded control)");
  RatioTable t;
  t.experiment = "sharpness";
  t.seed = cfg.seed;
  t.meta["dim"] = cfg.dim;
  t.meta["q"] = cfg.space.q;
  for (int J : cfg.depths) {
    const TorusGrid g = make_grid(cfg.dim, J);
    const LPPartition P = build_partition(g);
    const Symbol a = build_symbol(cfg.symbol, g);
    const auto [lo, hi] = resolve_blocks(cfg.symbol, g);
    const int total = hi - lo + 1;
    const std::size_t row0 = t.rows.size();
    for (int M = 1; M <= total; ++M) {
      const GridFunction u = lacunary_input(g, lo, M, cfg.symbol.d);
      const double dn = space_norm(u, P, cfg.space);
      const GridFunction Au = apply_direct(a, u);
      const double on = codomain_norm(Au, P, cfg);
      t.rows.push_back({J, M, -1, dn, on, on / dn});
    }
    append_summary(t, J, row0);
  }
  return t;
}

RatioTable negative_smoothness_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  ExperimentConfig shifted = cfg;
  shifted.codomain = Codomain::Shifted;
  RatioTable t;
  t.experiment = "negsmooth";
  t.seed = cfg.seed;
  t.meta["dim"] = cfg.dim;
  t.meta["trials"] = cfg.trials;
  t.meta["coeff_law"] = "std::normal_distribution<double>(0,1)";
  t.meta["twisted_fit"] = nlohmann::ordered_json::object();
  for (int J : cfg.depths) {
    const TorusGrid g = make_grid(cfg.dim, J);
    const LPPartition P = build_partition(g);
    Symbol a = build_symbol(cfg.symbol, g);
    const TwistedDiagonalFit fit = twisted_diagonal_fit(a);
    a.twisted_constant = fit.c_min;
    t.meta["twisted_fit"]["J" + std::to_string(J)] = fit.c_min;
    const auto [lo, hi] = resolve_blocks(cfg.symbol, g);
    const int total = hi - lo + 1;
    const int sym_blocks =
        cfg.symbol.kind == SymbolSpec::Kind::Ching ? total : 0;
    const std::size_t row0 = t.rows.size();
    for (long long trial = 0; trial < cfg.trials; ++trial) {
      double dn = 0.0;
      const GridFunction u =
          draw_input(g, P, cfg.space, stream_seed(cfg.seed, J, trial), dn);
      const GridFunction Au = apply_direct(a, u);
      const double on = codomain_norm(Au, P, shifted);
      t.rows.push_back({J, sym_blocks, trial, dn, on, on / dn});
    }
    {
      // Adversarial input: whichever single-mode witness (bottom or top
      // block) maximizes the ratio.  For s < 0 a twisted-diagonal symbol
      // folds the top mode down to frequency ~0 where the weight is 2^hi
      // times larger; for s > 0 the same folding damps the top mode and the
      // bottom mode carries the extremal (depth-independent) ratio instead.
      RatioRow best{J, 1, -1, 0.0, 0.0, -1.0};
      for (int blk : {lo, hi}) {
        const GridFunction u = lacunary_input(g, blk, 1, cfg.symbol.d);
        const double dn = space_norm(u, P, cfg.space);
        const GridFunction Au = apply_direct(a, u);
        const double on = codomain_norm(Au, P, shifted);
        if (on / dn > best.ratio) best = {J, 1, -1, dn, on, on / dn};
        if (lo == hi) break;
      }
      t.rows.push_back(best);
    }
    append_summary(t, J, row0);
  }
  return t;
}

GrowthTable l2_growth_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.symbol.kind != SymbolSpec::Kind::Ching)
    throw std::invalid_argument("l2growth needs the lacunary symbol");
  const int J = cfg.depths.front();
  const TorusGrid g = make_grid(cfg.dim, J);
  const LPPartition P = build_partition(g);
  const auto [lo, hi] = resolve_blocks(cfg.symbol, g);
  const SpaceParams dom{0.0, 2.0, 1.0, SpaceScale::TriebelLizorkin};
  GrowthTable t;
  t.experiment = "l2growth";
  t.seed = cfg.seed;
  t.depth = J;
  t.meta["r"] = cfg.symbol.r;
  t.meta["trials"] = cfg.trials;
  for (int m = 1; m <= hi - lo + 1; ++m) {
    SymbolSpec sub = cfg.symbol;
    sub.block_hi = lo + m - 1;
    const Symbol a = build_symbol(sub, g);
    const double norm = operator_norm_l2(a);
    double best = 0.0;
    for (long long trial = 0; trial < cfg.trials; ++trial) {
      double dn = 0.0;
      const GridFunction u = draw_input(
          g, P, dom, stream_seed(cfg.seed, J, 1024 * m + trial), dn);
      const GridFunction Au = apply_direct(a, u);
      best = std::max(best, lp_norm(Au, 2.0) / dn);
    }
    {
      const GridFunction u = lacunary_input(g, lo, m, 0.0);
      const double dn = space_norm(u, P, dom);
      const GridFunction Au = apply_direct(a, u);
      best = std::max(best, lp_norm(Au, 2.0) / dn);
    }
    t.rows.push_back({m, lo, lo + m - 1, norm, best});
  }
  return t;
}

// --- verdict helpers ---

std::vector<double> per_depth_max(const RatioTable& t) {
  std::vector<double> out;
  out.reserve(t.summary.size());
  for (const RatioSummary& s : t.summary) out.push_back(s.max_ratio);
  return out;
}

std::vector<double> adversarial_ratios(const RatioTable& t) {
  std::vector<double> out;
  for (const RatioRow& r : t.rows)
    if (r.trial == -1) out.push_back(r.ratio);
  return out;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope needs matching sizes >= 2");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("loglog_slope needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(ly.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0)
    throw std::invalid_argument("loglog_slope needs at least two distinct x");
  return num / den;
}

TrendVerdict assess_bounded(const RatioTable& t, double factor) {
  TrendVerdict v;
  const std::vector<double> m = per_depth_max(t);
  if (m.empty()) {
    v.detail = "no summary rows";
    return v;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double x : m) {
    if (!std::isfinite(x) || x <= 0.0) {
      v.detail = "nonfinite or zero ratio";
      return v;
    }
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  v.value = hi / lo;
  v.pass = v.value < factor;
  v.detail = "per-depth maxima vary by x" + fmt17(v.value) + " (bound x" +
             fmt17(factor) + ")";
  return v;
}

TrendVerdict assess_growing(std::span<const double> x,
                            std::span<const double> y, double min_slope) {
  TrendVerdict v;
  if (!strictly_increasing(y)) {
    v.detail = "ratios are not strictly increasing";
    if (x.size() == y.size() && y.size() >= 2) {
      bool ok = true;
      for (double t : y)
        if (!(t > 0.0)) ok = false;
      for (double t : x)
        if (!(t > 0.0)) ok = false;
      if (ok) v.value = loglog_slope(x, y);
    }
    return v;
  }
  v.value = loglog_slope(x, y);
  v.pass = v.value >= min_slope;
  v.detail = "log-log slope " + fmt17(v.value) + " (threshold " +
             fmt17(min_slope) + ")";
  return v;
}

// --- config parsing ---

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "dim") {
    dim = parse_int(key, value);
  } else if (key == "depths" || key == "depth") {
    depths.clear();
    std::string rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      depths.push_back(parse_int(key, trim(rest.substr(0, comma))));
      if (comma == std::string::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (depths.empty())
      throw std::invalid_argument("config lists no depths");
  } else if (key == "s") {
    space.s = parse_double(key, value);
  } else if (key == "p") {
    space.p = parse_double(key, value);
  } else if (key == "q") {
    space.q = parse_double(key, value);
  } else if (key == "scale") {
    if (value == "besov")
      space.scale = SpaceScale::Besov;
    else if (value == "tl" || value == "triebel-lizorkin")
      space.scale = SpaceScale::TriebelLizorkin;
    else
      throw std::invalid_argument("scale must be besov or tl, got: " + value);
  } else if (key == "codomain") {
    if (value == "lp")
      codomain = Codomain::Lp;
    else if (value == "same")
      codomain = Codomain::SameSpace;
    else if (value == "shifted")
      codomain = Codomain::Shifted;
    else
      throw std::invalid_argument("codomain must be lp, same or shifted, got: " +
                                  value);
  } else if (key == "kind") {
    if (value == "ching")
      symbol.kind = SymbolSpec::Kind::Ching;
    else if (value == "multiplier")
      symbol.kind = SymbolSpec::Kind::Multiplier;
    else if (value == "file")
      symbol.kind = SymbolSpec::Kind::CustomFile;
    else
      throw std::invalid_argument(
          "kind must be ching, multiplier or file, got: " + value);
  } else if (key == "r") {
    symbol.r = parse_double(key, value);
  } else if (key == "block_lo") {
    symbol.block_lo = parse_int(key, value);
  } else if (key == "block_hi") {
    symbol.block_hi = parse_int(key, value);
  } else if (key == "order" || key == "d") {
    symbol.d = parse_double(key, value);
  } else if (key == "symbol_file") {
    symbol.path = value;
  } else if (key == "trials") {
    trials = parse_int(key, value);
  } else if (key == "seed") {
    try {
      std::size_t pos = 0;
      seed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (...) {
      throw std::invalid_argument("config value for 'seed' is not an integer: " +
                                  value);
    }
  } else if (key == "min_slope") {
    min_slope = parse_double(key, value);
  } else if (key == "max_factor") {
    max_factor = parse_double(key, value);
  } else if (key == "expect") {
    if (value != "bounded" && value != "growing" && value != "none" &&
        value != "auto")
      throw std::invalid_argument(
          "expect must be bounded, growing, none or auto, got: " + value);
    expect = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_file(path, ExperimentConfig{});
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig cfg = std::move(base);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has no '=': " + body);
    cfg.set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace pdolab
