#pragma once
// Boundedness / sharpness experiment drivers.
//
// Each driver sweeps grid depth (or truncation length), applies a configured
// symbol to random or adversarial inputs, and records norm ratios in a
// deterministic table.  Identical config + seed reproduces the output
// byte for byte; per-trial RNG streams are derived with splitmix64 so the
// rows never depend on evaluation order.

#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "pdolab/partition.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab {

// How the output of the operator is measured against the input:
//   Lp        ratio ||Au||_{L_p} / ||u||_X       (endpoint regime)
//   SameSpace ratio ||Au||_X / ||u||_X           (multiplier controls)
//   Shifted   ratio ||Au||_{X, s - d} / ||u||_X  (order-d smoothing regime)
// where X is the configured domain space.
enum class Codomain { Lp, SameSpace, Shifted };

struct SymbolSpec {
  enum class Kind { Ching, Multiplier, CustomFile };
  Kind kind = Kind::Ching;
  double r = 1.0;     // lacunary modulation ratio; 1 = twisted-diagonal case
  int block_lo = 3;   // first lacunary block
  int block_hi = 0;   // last block; <= 0 means "depth - 3" (widest alias-safe)
  double d = 0.0;     // claimed order (lacunary coefficients c_j = 2^{jd})
  std::string path;   // CustomFile: symbol file to load
};

struct ExperimentConfig {
  int dim = 1;
  std::vector<int> depths = {6, 7, 8};
  SpaceParams space;  // domain space X
  Codomain codomain = Codomain::Lp;
  SymbolSpec symbol;
  int trials = 8;
  std::uint64_t seed = 1;
  // Verdict thresholds used by the CLI (growth slope / boundedness factor).
  double min_slope = 0.4;
  double max_factor = 2.0;
  std::string expect = "auto";  // bounded | growing | none | auto

  // Parses one key=value assignment (the config-file syntax); throws
  // std::invalid_argument on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);

  // Applies the file's assignments on top of `base`, so partial configs
  // inherit the caller's defaults.
  static ExperimentConfig from_file(const std::string& path,
                                    ExperimentConfig base);
  static ExperimentConfig from_file(const std::string& path);
};

// One measured ratio.  trial >= 0 labels random draws; trial = -1 is the
// deterministic adversarial input.  blocks records the lacunary block count
// involved (0 when the symbol has no block structure).
struct RatioRow {
  int depth = 0;
  int blocks = 0;
  long long trial = 0;
  double input_norm = 0.0;
  double output_norm = 0.0;
  double ratio = 0.0;
};

struct RatioSummary {
  int depth = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

struct RatioTable {
  std::string experiment;
  std::string rng = "splitmix64/mt19937_64";
  std::uint64_t seed = 0;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<RatioRow> rows;
  std::vector<RatioSummary> summary;  // one entry per depth, in sweep order

  // Data rows only, header
  //   experiment,depth,blocks,trial,input_norm,output_norm,ratio
  // with %.17g floats; summaries live in the JSON form.
  std::string csv() const;
  nlohmann::ordered_json to_json() const;
};

// Exact L2 operator norms of lacunary truncations.
struct GrowthRow {
  int block_count = 0;
  int block_lo = 0;
  int block_hi = 0;
  double operator_norm = 0.0;
  double bounded_ratio = 0.0;  // paired max ||Au||_2 / ||u||_{F^0_{2,1}}
};

struct GrowthTable {
  std::string experiment;
  std::string rng = "splitmix64/mt19937_64";
  std::uint64_t seed = 0;
  int depth = 0;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<GrowthRow> rows;

  // Header: experiment,depth,block_count,block_lo,block_hi,operator_norm,
  // bounded_ratio
  std::string csv() const;
  nlohmann::ordered_json to_json() const;
};

// Random inputs u with unit complex-Gaussian coefficients on |kappa| <= N/4,
// ratio ||Au||_codomain / ||u||_X per (depth, trial), plus one adversarial
// lacunary row per depth (trial = -1).
RatioTable boundedness_experiment(const ExperimentConfig& cfg);

// Adversarial inputs u_M = sum_{i<M} 2^{-j_i d} e(2^{j_i} x_1) matched to the
// symbol's blocks, ratio vs block count M = 1..total at each depth.  Requires
// q >= 1; q = 1 is the bounded control, q > 1 the growth regime.
RatioTable sharpness_experiment(const ExperimentConfig& cfg);

// Same sweep as boundedness but the codomain is forced to Shifted (order-d
// smoothing scale) and the adversarial row is the better of the two
// single-mode witnesses (bottom or top symbol block): the top mode is the
// blow-up witness for s < 0, the bottom mode the extremal for s > 0.
// Records the fitted twisted-diagonal constant per depth in meta.
RatioTable negative_smoothness_experiment(const ExperimentConfig& cfg);

// L2 operator norms of the truncations blocks lo..lo+m-1, m = 1..total, at
// the first configured depth (dense SVD; depth guard applies), paired with
// the max F^0_{2,1} -> L2 ratio over the configured random trials.
GrowthTable l2_growth_experiment(const ExperimentConfig& cfg);

// --- building blocks shared with the CLI and the tests ---

std::uint64_t splitmix64(std::uint64_t x);

// Instantiates the configured symbol on g (block_hi <= 0 resolves to
// depth - 3).  CustomFile loads and checks the grid shape.
Symbol build_symbol(const SymbolSpec& spec, const TorusGrid& g);

// Resolved lacunary block range used for adversarial inputs: the symbol's
// own blocks when it has them, otherwise 0..depth-3.
std::pair<int, int> resolve_blocks(const SymbolSpec& spec, const TorusGrid& g);

// Unit complex-Gaussian spectrum on |kappa| <= N/4 (deterministic in stream).
GridFunction random_input(const TorusGrid& g, std::uint64_t stream);

// sum_{i=0}^{count-1} 2^{-(lo+i) d} e(2^{lo+i} x_1)
GridFunction lacunary_input(const TorusGrid& g, int block_lo, int count,
                            double d);

// Per-depth maxima, in summary order / adversarial (trial = -1) ratios in
// row order.
std::vector<double> per_depth_max(const RatioTable& t);
std::vector<double> adversarial_ratios(const RatioTable& t);

bool strictly_increasing(std::span<const double> v);

// Least-squares slope of log y against log x (sizes must match, >= 2, all
// entries positive).
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct TrendVerdict {
  bool pass = false;
  double value = 0.0;  // the measured factor or slope
  std::string detail;
};

// Bounded verdict: max / min of the per-depth maxima stays below factor.
TrendVerdict assess_bounded(const RatioTable& t, double factor);

// Growth verdict: y monotonically increasing with loglog_slope(x, y) at
// least min_slope.
TrendVerdict assess_growing(std::span<const double> x,
                            std::span<const double> y, double min_slope);

}  // namespace pdolab
