#pragma once
#include <nlohmann/json.hpp>
#include <optional>

#include "pdolab/partition.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab {

// Claimed spectral region: a closed annulus / ball in the Euclidean norm of
// the integer frequency (radii carry 1e-9 slack), or an explicit lattice
// point set.
struct RegionSpec {
  enum class Kind { Annulus, Ball, Points };
  Kind kind = Kind::Ball;
  double inner = 0.0;
  double outer = 0.0;
  std::vector<std::size_t> points;  // sorted lattice indices (Points only)

  static RegionSpec annulus(double inner, double outer);
  static RegionSpec ball(double outer);
  static RegionSpec point_set(const SupportSet& s);

  bool contains(const TorusGrid& g, std::size_t index) const;
};

// Outcome of one inclusion check: pass exactly when every observed support
// point lies in the claimed region; otherwise the strongest excluded
// coefficient is recorded.
struct SupportReport {
  RegionSpec claimed;
  SupportSet observed;
  bool pass = true;
  std::size_t worst_index = 0;   // meaningful only when !pass
  double worst_magnitude = 0.0;  // |coefficient| at worst_index
  bool asymptotic = false;       // below the k-threshold (S2' only)
};

nlohmann::ordered_json to_json(const SupportReport& r);

// The support rule: the output spectrum of b(x,D)v lies in
//   { xi + eta : (xi, eta) in supp hat b, eta in supp hat v }.
// Joint (xi, eta) pairs of the symbol spectrum are enumerated exactly; a
// pair whose sum leaves the lattice throws aliasing_error, as the discrete
// sum would wrap.  An inclusion failure here is a bug, not noise.
SupportReport support_rule_check(const Symbol& b, const GridFunction& v,
                                 double rel_threshold = kSupportThreshold);

// Spectral localization of the three splitting parts at shell k:
//   s1       : both off-diagonal terms at k vs the annulus [2^k/5, 5*2^k]
//   s2       : the diagonal term at k vs the ball |xi| <= 4*2^k
//   s2_prime : the diagonal term vs [2^k/(4C), 4*2^k]; present only when the
//              symbol claims a twisted-diagonal constant C.  Reports with
//              k below k_threshold (the smallest k with 2^k > 40 C) are
//              flagged asymptotic: the bound is only claimed for large k.
struct LocalizationResult {
  SupportReport s1;
  SupportReport s2;
  std::optional<SupportReport> s2_prime;
  int k_threshold = 0;
};

// Requires 2 <= k <= jmax - 1.
LocalizationResult localization_check(const Symbol& a, const GridFunction& u,
                                      const LPPartition& P, int k);

}  // namespace pdolab
