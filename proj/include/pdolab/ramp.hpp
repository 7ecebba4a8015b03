#pragma once
#include <cmath>

namespace pdolab {

// Smooth cutoff machinery shared by the dyadic partition and the test
// symbols.  Everything is built from the classic C^infinity glue
//   psi(x) = exp(-1/x) (x > 0),  step(x) = psi(x) / (psi(x) + psi(1-x)),
// which is exactly 0 for x <= 0 and exactly 1 for x >= 1, so all cutoffs
// below are *exact* 0/1 outside their transition zones -- no thresholding
// is ever needed to recover their supports on the lattice.

inline double glue_piece(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = glue_piece(x);
  const double b = glue_piece(1.0 - x);
  return a / (a + b);
}

// Radial ramp: 1 for r <= 11/10, 0 for r >= 13/10, smoothly decreasing in
// between.  This is the generator of the dyadic partition.
inline constexpr double kRampFlatEdge = 1.1;
inline constexpr double kRampZeroEdge = 1.3;

inline double radial_ramp(double r) {
  return smooth_step((kRampZeroEdge - r) / (kRampZeroEdge - kRampFlatEdge));
}

// Radial bump: 1 for r <= 1/2, 0 for r >= 1.  Used by the lacunary test
// symbols to carve one spectral window per dyadic shell.
inline double radial_bump(double r) { return smooth_step(2.0 * (1.0 - r)); }

}  // namespace pdolab
