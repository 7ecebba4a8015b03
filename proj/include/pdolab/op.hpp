#pragma once
#include <Eigen/Core>
#include <string>

#include "pdolab/symbol.hpp"

namespace pdolab {

// Au(x_m) = sum_kappa a(x_m, kappa) hat u(kappa) e^{i x_m . kappa}.
// Phases are read from one exact mod-N twiddle table, and the inner sum runs
// in a fixed serial order, so results are identical for any thread count.
GridFunction apply_direct(const Symbol& a, const GridFunction& u);

// Paradifferential splitting along the dyadic shells of symbol x-spectrum
// (index j) and input frequency (index k):
//   low_high : j <= k - 2   (symbol rougher scale, input finer)
//   diagonal : |j - k| <= 1
//   high_low : k <= j - 2
// The three parts sum back to apply_direct(a, u) exactly (up to roundoff);
// per-shell terms are kept for localization studies.  low_high_terms[k] and
// diagonal_terms[k] collect the terms with input shell k; high_low_terms[j]
// collects the terms with symbol shell j.  Entries below index 2 of
// low_high_terms / high_low_terms are identically zero.
struct SplitResult {
  GridFunction low_high;
  GridFunction diagonal;
  GridFunction high_low;
  std::vector<GridFunction> low_high_terms;
  std::vector<GridFunction> diagonal_terms;
  std::vector<GridFunction> high_low_terms;

  GridFunction total() const;
};

SplitResult apply_split(const Symbol& a, const GridFunction& u,
                        const LPPartition& P);

// Applies one dyadic block through its convolution kernel:
//   Au(x_m) = N^{-n} sum_{m'} K_m(x_m - x_{m'}) u(x_{m'}),
//   K_m(z)  = sum_eta a_{j,k}(x_m, eta) e^{i z . eta},
// a computational path independent of apply_direct.
GridFunction kernel_apply(const BlockSymbol& b, const GridFunction& u);

// Dense matrix A[m, m'] = N^{-n} K_m(x_m - x_{m'}).  Guarded: more than 256
// spatial points throw resource_error.
Eigen::MatrixXcd operator_matrix(const Symbol& a);

// Largest singular value of operator_matrix: the L2 -> L2 operator norm
// (quadrature weights cancel between input and output).
double operator_norm_l2(const Symbol& a);

// index,x1,x2 then re/im pairs for the three parts of the splitting.
std::string split_result_csv(const SplitResult& s);

}  // namespace pdolab
