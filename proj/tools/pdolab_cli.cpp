// pdolab command-line driver: experiment sweeps, support checks, partition
// dumps.  Data goes to stdout (or the --out file); verdict lines go to
// stderr so the tables stay machine-readable.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdolab/experiments.hpp"
#include "pdolab/partition.hpp"
#include "pdolab/support.hpp"

using namespace pdolab;

namespace {

constexpr const char* kFooter = R"(Config file: one key=value per line, '#' comments.
Keys: dim, depths (comma list), s, p, q (numbers; 'inf' allowed),
      scale (besov|tl), codomain (lp|same|shifted),
      kind (ching|multiplier|file), r, block_lo, block_hi (0 = depth-3),
      order, symbol_file, trials, seed, min_slope, max_factor,
      expect (bounded|growing|none|auto).
Command-line --seed/--dim/--depth override the config file.

--out csv|json prints to stdout; a path ending in .csv/.json writes a file.

CSV columns
  boundedness/sharpness/negsmooth:
    experiment,depth,blocks,trial,input_norm,output_norm,ratio
    (trial -1 marks the deterministic adversarial input; ratio is
     output_norm/input_norm in the configured codomain/domain norms)
  l2growth:
    experiment,depth,block_count,block_lo,block_hi,operator_norm,bounded_ratio
  supportcheck:
    case,trial,pass,claimed_points,observed_points,worst_magnitude
  partition-dump:
    block,index,k1,k2,value

Exit status: 0 verdict passed (or expect=none), 1 usage/config error,
2 failed invariant or verdict.
)";

struct Common {
  std::string config_path;
  std::string out = "csv";
  std::uint64_t seed = 0;
  int dim = 0;
  std::vector<int> depths;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path,
                  "key=value config file (see --help of the top command)");
  sub->add_option("--out", c.out,
                  "csv | json | path ending in .csv/.json (default csv)");
  sub->add_option("--seed", c.seed, "RNG seed override");
  sub->add_option("--dim", c.dim, "torus dimension override (1 or 2)");
  sub->add_option("--depth", c.depths, "depth list override")
      ->delimiter(',');
}

ExperimentConfig load_config(const CLI::App* sub, const Common& c,
                             ExperimentConfig defaults) {
  ExperimentConfig cfg =
      c.config_path.empty()
          ? std::move(defaults)
          : ExperimentConfig::from_file(c.config_path, std::move(defaults));
  if (sub->count("--seed")) cfg.seed = c.seed;
  if (sub->count("--dim")) cfg.dim = c.dim;
  if (sub->count("--depth")) cfg.depths = c.depths;
  return cfg;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void emit(const std::string& dest, const std::string& csv,
          const nlohmann::ordered_json& j) {
  if (dest == "csv") {
    std::fputs(csv.c_str(), stdout);
  } else if (dest == "json") {
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
  } else if (ends_with(dest, ".csv")) {
    std::ofstream f(dest);
    if (!f) throw std::invalid_argument("cannot write to " + dest);
    f << csv;
  } else if (ends_with(dest, ".json")) {
    std::ofstream f(dest);
    if (!f) throw std::invalid_argument("cannot write to " + dest);
    f << j.dump(2) << "\n";
  } else {
    throw std::invalid_argument(
        "--out must be csv, json, or a path ending in .csv/.json");
  }
}

std::string resolve_expect(const ExperimentConfig& cfg,
                           const std::string& which) {
  if (cfg.expect != "auto") return cfg.expect;
  const bool twisted =
      cfg.symbol.kind == SymbolSpec::Kind::Ching && cfg.symbol.r > 0.5;
  if (which == "sharpness")
    return (cfg.space.q > 1.0 && twisted) ? "growing" : "bounded";
  if (which == "negsmooth")
    return (twisted && cfg.space.s < 0.0) ? "growing" : "bounded";
  if (which == "l2growth") return twisted ? "growing" : "bounded";
  return "bounded";
}

int report_verdict(const std::string& name, const TrendVerdict& v) {
  std::fprintf(stderr, "verdict[%s]: %s (%s)\n", name.c_str(),
               v.pass ? "PASS" : "FAIL", v.detail.c_str());
  return v.pass ? 0 : 2;
}

// Bounded/growing verdict for a ratio sweep.  Growth is judged on the
// adversarial rows against the given per-depth x values.
int ratio_verdict(const RatioTable& t, const ExperimentConfig& cfg,
                  const std::string& expect, const std::vector<double>& x) {
  if (expect == "none") return 0;
  if (expect == "bounded")
    return report_verdict(t.experiment, assess_bounded(t, cfg.max_factor));
  return report_verdict(
      t.experiment, assess_growing(x, adversarial_ratios(t), cfg.min_slope));
}

int run_sharpness(const ExperimentConfig& cfg, const std::string& dest) {
  const RatioTable t = sharpness_experiment(cfg);
  emit(dest, t.csv(), t.to_json());
  const std::string expect = resolve_expect(cfg, "sharpness");
  if (expect == "none") return 0;
  int rc = 0;
  for (const RatioSummary& s : t.summary) {
    std::vector<double> xs, ys;
    for (const RatioRow& r : t.rows)
      if (r.depth == s.depth) {
        xs.push_back(r.blocks);
        ys.push_back(r.ratio);
      }
    TrendVerdict v;
    if (expect == "growing") {
      v = assess_growing(xs, ys, cfg.min_slope);
    } else {
      double lo = ys[0], hi = ys[0];
      for (double y : ys) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      v.value = hi / lo;
      v.pass = std::isfinite(v.value) && v.value < cfg.max_factor;
      char buf[96];
      std::snprintf(buf, sizeof buf, "ratio varies by x%g (bound x%g)",
                    v.value, cfg.max_factor);
      v.detail = buf;
    }
    rc |= report_verdict("sharpness J=" + std::to_string(s.depth), v);
  }
  return rc;
}

int run_l2growth(const ExperimentConfig& cfg, const std::string& dest) {
  const GrowthTable t = l2_growth_experiment(cfg);
  emit(dest, t.csv(), t.to_json());
  const std::string expect = resolve_expect(cfg, "l2growth");
  if (expect == "none") return 0;
  std::vector<double> xs, ys;
  for (const GrowthRow& r : t.rows) {
    xs.push_back(r.block_count);
    ys.push_back(r.operator_norm);
  }
  TrendVerdict v;
  if (expect == "growing") {
    v = assess_growing(xs, ys, cfg.min_slope);
  } else {
    double lo = ys[0], hi = ys[0];
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    v.value = hi / lo;
    v.pass = std::isfinite(v.value) && v.value < cfg.max_factor;
    char buf[96];
    std::snprintf(buf, sizeof buf, "operator norm varies by x%g (bound x%g)",
                  v.value, cfg.max_factor);
    v.detail = buf;
  }
  return report_verdict("l2growth", v);
}

GridFunction banded_random(const TorusGrid& g, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralFunction s{g, std::vector<cplx>(g.lattice_size())};
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    if (g.freq(i).norm() <= band) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      s.coeffs[i] = cplx(re, im);
    }
  return inverse_fourier(s);
}

Symbol banded_random_symbol(const TorusGrid& g, int band,
                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t L = g.lattice_size();
  SymbolSpectrum s{g, std::vector<cplx>(L * L)};
  for (std::size_t ixi = 0; ixi < L; ++ixi) {
    if (g.freq(ixi).norm() > band) continue;
    for (std::size_t ieta = 0; ieta < L; ++ieta) {
      if (g.freq(ieta).norm() > band) continue;
      const double re = gauss(rng);
      const double im = gauss(rng);
      s.values[ixi * L + ieta] = cplx(re, im);
    }
  }
  return symbol_from_spectrum(s);
}

int run_supportcheck(const ExperimentConfig& cfg, const std::string& dest) {
  const int J = cfg.depths.front();
  const TorusGrid g = make_grid(cfg.dim, J);
  const int band = g.extent() / 8;
  struct Case {
    std::string label;
    long long trial;
    SupportReport report;
  };
  std::vector<Case> cases;
  for (long long trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(splitmix64(cfg.seed) ^
                        splitmix64(static_cast<std::uint64_t>(trial) + 1));
    const Symbol b = banded_random_symbol(g, band, rng);
    const GridFunction v = banded_random(g, band, rng);
    cases.push_back({"random", trial, support_rule_check(b, v)});
  }
  if (cfg.dim == 1 && J >= 6) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ 0xABCDEF1234567890ull));
    const Symbol b = ching_symbol(g, 1.0, 3, J - 3);
    const GridFunction v = banded_random(g, band, rng);
    cases.push_back({"lacunary", -1, support_rule_check(b, v)});
  }
  std::string csv =
      "case,trial,pass,claimed_points,observed_points,worst_magnitude\n";
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  bool all_pass = true;
  for (const Case& c : cases) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g",
                  c.report.pass ? 0.0 : c.report.worst_magnitude);
    csv += c.label + "," + std::to_string(c.trial) + "," +
           (c.report.pass ? "1" : "0") + "," +
           std::to_string(c.report.claimed.points.size()) + "," +
           std::to_string(c.report.observed.size()) + "," + buf + "\n";
    nlohmann::ordered_json item;
    item["case"] = c.label;
    item["trial"] = c.trial;
    item["report"] = to_json(c.report);
    arr.push_back(std::move(item));
    all_pass = all_pass && c.report.pass;
  }
  nlohmann::ordered_json j;
  j["experiment"] = "supportcheck";
  j["seed"] = cfg.seed;
  j["cases"] = std::move(arr);
  emit(dest, csv, j);
  std::fprintf(stderr, "verdict[supportcheck]: %s (%zu cases)\n",
               all_pass ? "PASS" : "FAIL", cases.size());
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pdolab: spectral laboratory for rough (type 1,1) operators on the "
      "discrete torus"};
  app.footer(kFooter);
  app.require_subcommand(1);

  Common c;
  CLI::App* boundedness = app.add_subcommand(
      "boundedness", "random-input norm-ratio sweep across depths");
  CLI::App* sharpness = app.add_subcommand(
      "sharpness", "adversarial lacunary growth versus block count");
  CLI::App* negsmooth = app.add_subcommand(
      "negsmooth", "negative-smoothness sweep (shifted codomain)");
  CLI::App* l2growth = app.add_subcommand(
      "l2growth", "exact L2 operator norms of lacunary truncations");
  CLI::App* supportcheck = app.add_subcommand(
      "supportcheck", "spectral support rule on random and lacunary data");
  CLI::App* partition = app.add_subcommand(
      "partition-dump", "dump the dyadic partition tables");
  for (CLI::App* sub :
       {boundedness, sharpness, negsmooth, l2growth, supportcheck, partition})
    add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // help/version are 0, everything else is usage
  }

  try {
    if (boundedness->parsed()) {
      ExperimentConfig def;
      def.space = {0.0, 2.0, 1.0, SpaceScale::TriebelLizorkin};
      const ExperimentConfig cfg = load_config(boundedness, c, def);
      const RatioTable t = boundedness_experiment(cfg);
      emit(c.out, t.csv(), t.to_json());
      std::vector<double> x;
      for (const RatioRow& r : t.rows)
        if (r.trial == -1) x.push_back(r.blocks);
      return ratio_verdict(t, cfg, resolve_expect(cfg, "boundedness"), x);
    }
    if (sharpness->parsed()) {
      ExperimentConfig def;
      def.depths = {10};
      def.symbol.block_lo = 0;
      def.space = {0.0, 2.0, std::numeric_limits<double>::infinity(),
                   SpaceScale::Besov};
      return run_sharpness(load_config(sharpness, c, def), c.out);
    }
    if (negsmooth->parsed()) {
      ExperimentConfig def;
      def.symbol.r = 0.5;
      def.space = {-1.0, 2.0, 2.0, SpaceScale::TriebelLizorkin};
      const ExperimentConfig cfg = load_config(negsmooth, c, def);
      const RatioTable t = negative_smoothness_experiment(cfg);
      emit(c.out, t.csv(), t.to_json());
      std::vector<double> x;
      for (const RatioSummary& s : t.summary)
        x.push_back(std::ldexp(1.0, s.depth));
      return ratio_verdict(t, cfg, resolve_expect(cfg, "negsmooth"), x);
    }
    if (l2growth->parsed()) {
      ExperimentConfig def;
      def.depths = {8};
      def.symbol.block_lo = 1;
      def.symbol.block_hi = 5;
      def.trials = 4;
      return run_l2growth(load_config(l2growth, c, def), c.out);
    }
    if (supportcheck->parsed()) {
      ExperimentConfig def;
      def.depths = {7};
      def.trials = 20;
      return run_supportcheck(load_config(supportcheck, c, def), c.out);
    }
    // partition-dump
    ExperimentConfig def;
    const ExperimentConfig cfg = load_config(partition, c, def);
    const TorusGrid g = make_grid(cfg.dim, cfg.depths.front());
    const LPPartition P = build_partition(g);
    std::ostringstream os;
    write_partition_dump(os, P);
    if (c.out != "csv" && !ends_with(c.out, ".csv"))
      throw std::invalid_argument("partition-dump only writes csv");
    emit(c.out, os.str(), {});
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failed invariant: %s\n", e.what());
    return 2;
  }
}
