#pragma once
#include "pdolab/grid.hpp"

namespace pdolab::detail {

// Thin wrapper over FFTW with a per-(dim, extent) plan cache.  Transforms
// are unscaled and use FFTW's natural frequency order; the shift helpers
// convert between natural order and the signed lattice order used by
// SpectralFunction.  Plan creation is serialized internally; execution on
// distinct buffers is safe from concurrent threads.
void dft_forward(const TorusGrid& g, const cplx* in, cplx* out);
void dft_backward(const TorusGrid& g, const cplx* in, cplx* out);

void shift_to_signed(const TorusGrid& g, const cplx* natural, cplx* sig);
void shift_to_natural(const TorusGrid& g, const cplx* sig, cplx* natural);

}  // namespace pdolab::detail
