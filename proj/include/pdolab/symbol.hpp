#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pdolab/grid.hpp"
#include "pdolab/partition.hpp"

namespace pdolab {

// Discretized symbol a(x, eta): dense table indexed by (grid point m,
// lattice frequency i), entry (m, i) = a(x_m, kappa_i).  order/rho/delta
// describe the claimed symbol class S^order_{rho,delta}; they scale the
// seminorm weights and are carried through serialization.
// twisted_constant, when set, is a claimed constant C >= 1 for the
// twisted-diagonal support condition
//   hat a(xi, eta) = 0 whenever C (|xi + eta| + 1) <= |eta|,
// i.e. the spectral support stays away from the line xi = -eta.
struct Symbol {
  TorusGrid grid;
  std::vector<cplx> samples;  // samples[m * L + i], L = lattice size
  double order = 0.0;
  double rho = 1.0;
  double delta = 1.0;
  std::optional<double> twisted_constant;

  cplx& at(std::size_t m, std::size_t i) {
    return samples[m * grid.lattice_size() + i];
  }
  const cplx& at(std::size_t m, std::size_t i) const {
    return samples[m * grid.lattice_size() + i];
  }
};

// Guard for the quadratic table: lattice_size^2 entries must stay below
// 2^26 (~1 GiB of complex doubles); throws resource_error beyond.
Symbol zero_symbol(const TorusGrid& g, double order = 0.0, double rho = 1.0,
                   double delta = 1.0);

// hat a(xi, eta): the x-spectrum of every frequency column, same dense
// layout with xi as the row index.
struct SymbolSpectrum {
  TorusGrid grid;
  std::vector<cplx> values;  // values[i_xi * L + i_eta]

  const cplx& at(std::size_t ixi, std::size_t ieta) const {
    return values[ixi * grid.lattice_size() + ieta];
  }
};

SymbolSpectrum symbol_spectrum(const Symbol& a);
Symbol symbol_from_spectrum(const SymbolSpectrum& s, double order = 0.0,
                            double rho = 1.0, double delta = 1.0);

// x-independent symbol a(x, eta) = m(eta).
Symbol multiplier_symbol(const TorusGrid& g, const std::vector<cplx>& m,
                         double order = 0.0);

// a(x, eta) = g(x) m(eta).
Symbol elementary_symbol(const GridFunction& gfun, const std::vector<cplx>& m,
                         double order = 0.0);

// (1 + |eta|^2)^{order/2}: the standard elliptic weight, class (1,0).
Symbol bracket_symbol(const TorusGrid& g, double order);

// Lacunary exponential-times-bump symbol
//   a(x, eta) = sum_{j=block_lo}^{block_hi} c_j exp(-i r 2^j x_1)
//               chi( (eta - 2^j e_1) / 2^{j-2} )
// with chi the radial bump of ramp.hpp (1 inside radius 1/2, 0 outside 1).
// Requires r in (0, 1] with every r 2^j integral (the modulation must lie on
// the lattice) and (1 + max(r, 1/4)) 2^{block_hi} <= N/4 (all spectra stay in
// the inner quarter of the lattice, so applying the symbol cannot alias).
// coeffs, when nonempty, supplies c_j (size block_hi - block_lo + 1);
// default c_j = 1.  r = 1 puts the spectrum exactly on the twisted diagonal;
// r <= 1/2 keeps it uniformly away.
Symbol ching_symbol(const TorusGrid& g, double r, int block_lo, int block_hi,
                    const std::vector<double>& coeffs = {});

// Symbol-class seminorm surrogates
//   c_{alpha beta} = sup_{x_m, |kappa| <= N/4}
//     |Delta^alpha_eta D^beta_x a(x_m, kappa)| (1+|kappa|)^{-(d - rho|alpha| + delta|beta|)}
// with unit-step iterated central differences in eta and exact spectral
// derivatives in x.  alpha, beta range componentwise over [0, alpha_max] x
// [0, beta_max]; both maxima are capped at dim + 1.
struct SeminormTable {
  int dim = 1;
  int alpha_max = 0;
  int beta_max = 0;
  std::vector<double> values;

  double at(std::array<int, 2> alpha, std::array<int, 2> beta) const;
  double max() const;
};

SeminormTable seminorm_estimate(const Symbol& a, int alpha_max, int beta_max);

// Twisted-diagonal support condition at a claimed constant C >= 1: scans the
// thresholded support of hat a and reports every pair with
// C (|xi+eta| + 1) <= |eta| (the worst few, by coefficient magnitude).
struct TwistedViolation {
  Freq xi, eta;
  double magnitude = 0.0;
  double ratio = 0.0;  // |eta| / (|xi+eta| + 1)
};

struct TwistedDiagonalReport {
  bool pass = false;
  double claimed_C = 1.0;
  std::size_t support_pairs = 0;
  std::vector<TwistedViolation> violations;  // worst offenders, at most 8
};

TwistedDiagonalReport twisted_diagonal_check(const Symbol& a, double C,
                                             double rel_threshold = kSupportThreshold);

// Smallest viable constant: c_min = max(1, max ratio over the thresholded
// support).  Any C strictly above c_min passes twisted_diagonal_check; at
// C = c_min the extremal pair itself sits on the boundary of the excluded
// region, so the check may still fail there.
struct TwistedDiagonalFit {
  double c_min = 1.0;
  double max_ratio = 0.0;
  Freq arg_xi, arg_eta;
};

TwistedDiagonalFit twisted_diagonal_fit(const Symbol& a,
                                        double rel_threshold = kSupportThreshold);

// Dyadic symbol block a_{j,k}(x, eta) = [Phi_j(D_x) a](x, eta) Phi_k(eta):
// x-spectrum filtered to dyadic shell j, frequency argument masked to shell
// k.  Summing over all (j, k) recovers a exactly.
struct BlockSymbol {
  int j = 0;
  int k = 0;
  Symbol sym;
};

BlockSymbol symbol_block(const Symbol& a, const LPPartition& P, int j, int k);

// Norms of the rescaled low-x-frequency slice
//   g_x(xi) = [Psi_{k-2}(D_x) a](x, 2^k xi) * (broadened block k)(2^k xi),
// sampled at xi = kappa 2^-k: the homogeneous-Besov surrogate (sup over x)
// and the finite-difference Sobolev-style bound
// sum_{|alpha| <= dim+1} L1(Delta^alpha g_x) (sup over x), both compared
// against the natural scale 2^{k order}.  Requires 2 <= k <= jmax - 1.
struct SliceNormResult {
  int k = 0;
  double t = 0.0;
  double besov = 0.0;
  double sobolev = 0.0;
  double scale = 1.0;  // 2^{k order}
  double besov_ratio = 0.0;
  double sobolev_ratio = 0.0;
};

SliceNormResult rescaled_slice_norm(const Symbol& a, const LPPartition& P,
                                    int k, double t);

// Binary serialization (magic, dim, depth, order, rho, delta, twisted flag +
// value, then the dense complex table).  load_symbol validates the header
// and the payload size.
void save_symbol(const std::string& path, const Symbol& a);
Symbol load_symbol(const std::string& path);

}  // namespace pdolab
