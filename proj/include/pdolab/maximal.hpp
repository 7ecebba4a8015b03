#pragma once
#include "pdolab/partition.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab {

// Parameters of the discrete t-maximal function
//   M_t f(x) = max_{r in radii} ( avg_{B(x,r)} |f|^t )^{1/t},
// with B(x,r) the OPEN ball {y : torus_dist(x,y) < r} and averages over grid
// points with counting measure.  Open balls make the smallest admissible
// radius (one grid spacing) reproduce the continuum r -> 0 limit: the ball
// is the point itself, so M_t f >= |f| pointwise.
struct MaximalParams {
  double t = 1.0;              // in (0, 1]
  std::vector<double> radii;   // strictly increasing, in [spacing, pi]
};

// The dyadic ladder {2^m spacing : m = 0 .. depth-1}; the top radius is
// exactly the half-period pi.  Finer ladders change M_t only by a bounded
// factor (frozen by a refinement test).
std::vector<double> dyadic_radii(const TorusGrid& g);
MaximalParams dyadic_params(const TorusGrid& g, double t);

// Nonnegative real-valued result (imaginary parts are exactly zero).
GridFunction maximal_function(const GridFunction& f, const MaximalParams& mp);

// Empirical constant in the pointwise bound
//   |b(x,D)v(x)| <= c || b(x, 2^k .) ||_hom-Besov(t) * M_t v(x):
// the sup over grid points of the left side divided by the right side.
// Preconditions (the estimate's hypothesis): the x-spectrum of b and the
// spectrum of v lie in the closed ball B(0, 2^k) with k <= depth-2.  Points
// where the right side is below 1e-14 of its maximum are excluded from the
// sup (0/0 counts as 0); returns 0 if every point is excluded.
double pointwise_estimate_ratio(const Symbol& b, const GridFunction& v, int k,
                                double t);

// || sum_k M_t u_k ||_p / || sum_k |u_k| ||_p over the dyadic blocks u_k of
// u: the empirical constant of the vector-valued maximal inequality.
// Requires t < 1 <= p < infinity (the estimate needs dim/t < dim + 1).
// Returns 0 for u identically zero.
double vector_maximal_check(const GridFunction& u, const LPPartition& P,
                            double p, double t);

}  // namespace pdolab
