#pragma once
#include <random>

#include "pdolab/grid.hpp"

namespace testutil {

using pdolab::cplx;
using pdolab::GridFunction;
using pdolab::SpectralFunction;
using pdolab::TorusGrid;

// Complex standard Gaussian samples at every grid point.
inline GridFunction random_function(const TorusGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  GridFunction u{g, std::vector<cplx>(g.lattice_size())};
  for (auto& v : u.values) v = cplx(normal(rng), normal(rng));
  return u;
}

// Gaussian coefficients on |kappa| <= band, zero elsewhere.
inline SpectralFunction random_spectrum(const TorusGrid& g, double band,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralFunction s{g, std::vector<cplx>(g.lattice_size())};
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    if (g.freq(i).norm() <= band) s.coeffs[i] = cplx(normal(rng), normal(rng));
  return s;
}

inline double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
