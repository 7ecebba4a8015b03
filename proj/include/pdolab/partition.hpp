#pragma once
#include <iosfwd>
#include <span>
#include <vector>

#include "pdolab/grid.hpp"

namespace pdolab {

// Dyadic partition of unity on the frequency lattice, built from the radial
// ramp phi(r) (see ramp.hpp):
//   block 0       = phi(|kappa|)
//   block j       = phi(2^-j |kappa|) - phi(2^-(j-1) |kappa|),  0 < j < jmax
//   block jmax    = 1 - phi(2^-(jmax-1) |kappa|)
// with jmax = depth - 1.  The top block absorbs everything the telescoping
// sum would otherwise assign to finer shells, so the blocks sum to 1 at
// every lattice point.  Block j (0 < j < jmax) vanishes identically outside
// the open annulus (11/20) 2^j < |kappa| < (13/10) 2^j and equals 1 on
// (13/20) 2^j <= |kappa| <= (11/10) 2^j.
struct LPPartition {
  TorusGrid grid;
  int jmax = 0;
  std::vector<std::vector<double>> blocks;         // blocks[j], signed order
  std::vector<std::vector<std::size_t>> supports;  // indices with blocks[j] > 0

  // Broadened block: blocks k-1, k, k+1 summed (indices outside [0,jmax]
  // omitted).  Equals 1 on the support of block k.
  std::vector<double> broadened(int k) const;

  // Low-pass cut: blocks 0..k summed; k < 0 gives the zero table, k >= jmax
  // the all-ones table.
  std::vector<double> low_pass(int k) const;
};

LPPartition build_partition(const TorusGrid& g);

// u_j = (block j)(D) u.  Throws std::invalid_argument for j outside [0,jmax].
GridFunction lp_block(const GridFunction& u, const LPPartition& P, int j);

// ( sum_j (2^{js} ||u_j||_p)^q )^{1/q}, with the usual max convention for
// q = infinity.  0 < p,q <= infinity.
double besov_norm(const GridFunction& u, const LPPartition& P, double s,
                  double p, double q);

// || ( sum_j (2^{js} |u_j(x)|)^q )^{1/q} ||_p.  Requires p < infinity; the
// scale degenerates otherwise and callers must use besov_norm instead.
double triebel_lizorkin_norm(const GridFunction& u, const LPPartition& P,
                             double s, double p, double q);

enum class SpaceScale { Besov, TriebelLizorkin };

struct SpaceParams {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  SpaceScale scale = SpaceScale::TriebelLizorkin;
};

double space_norm(const GridFunction& u, const LPPartition& P,
                  const SpaceParams& sp);

// A function of the continuous frequency variable xi, sampled on the scaled
// lattice {kappa h : kappa in Lambda} of `grid`.  Used for rescaled symbol
// slices, where xi = 2^-k eta and h = 2^-k.
struct FrequencySlice {
  TorusGrid grid;
  double h = 0.0;
  std::vector<cplx> values;  // signed order
};

struct HomBesovResult {
  double value = 0.0;
  double h = 0.0;
  int block_lo = 0;
  int block_hi = 0;
  bool annulus_enforced = true;
  // Relative mass of the homogeneous blocks below block_lo that the fixed
  // window drops; only ball-supported slices can make this nonzero.
  double tail_fraction = 0.0;
};

// Homogeneous-Besov surrogate ( sum_j (2^{jn/t} L1(Phi_j^hom g))^t )^{1/t}
// over the fixed window j in [-4, 4], where Phi_j^hom(xi) =
// phi(2^-j |xi|) - phi(2^-j+1 |xi|) and L1 is the Riemann sum h^n sum |.|.
// Slices must vanish (relative threshold 1e-10) outside |xi| <= 8; with
// require_annulus they must also vanish inside |xi| < 1/8, which makes the
// window exact.  With require_annulus = false (ball-supported slices) the
// dropped low-frequency mass is measured and reported as tail_fraction.
HomBesovResult homogeneous_besov_norm(const FrequencySlice& slice, double t,
                                      bool require_annulus = true);

// Precomputed block-weight tables for evaluating many slices on one
// (lattice, h) pair; norm() is safe to call concurrently.
class HomBesovEvaluator {
 public:
  HomBesovEvaluator(const TorusGrid& lattice, double h);
  HomBesovResult norm(std::span<const cplx> values, double t,
                      bool require_annulus) const;
  // Same norm with entries outside `support` taken to be exactly zero;
  // callers with sparse slices skip the full-lattice scan.
  HomBesovResult norm(std::span<const cplx> values, double t,
                      bool require_annulus,
                      std::span<const std::size_t> support) const;

  static constexpr int kBlockLo = -4;
  static constexpr int kBlockHi = 4;
  static constexpr int kTailBlocks = 12;  // measured below kBlockLo

 private:
  TorusGrid grid_;
  double h_;
  std::vector<double> radius_;               // |kappa| h per index
  std::vector<std::vector<double>> weight_;  // per block, kBlockLo-kTailBlocks..kBlockHi
  std::vector<std::size_t> all_;             // identity support for dense calls
};

// Tabular dump of the partition (block, index, lattice point, value) for the
// support of every block; used by the CLI for debugging.
void write_partition_dump(std::ostream& os, const LPPartition& P);

}  // namespace pdolab
