#pragma once
#include "pdolab/grid.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab::ref {

// Deliberately naive serial implementations, kept as oracles for the
// OpenMP/FFT production kernels.  Quadratic cost; use small grids.

SpectralFunction forward_fourier(const GridFunction& u);
GridFunction inverse_fourier(const SpectralFunction& s);

// Direct double sum with per-term std::polar phases (no shared twiddle
// table, no FFT for the coefficients).
GridFunction apply_direct(const Symbol& a, const GridFunction& u);

// Straight from the definition: for every point and radius, scan the whole
// grid and test the wrapped integer lattice offset against the radius (the
// same open-ball membership rule as the production kernel, so exact-lattice
// radii resolve their boundary ties identically).
GridFunction maximal_function(const GridFunction& f, double t,
                              const std::vector<double>& radii);

}  // namespace pdolab::ref
