#include "pdolab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pdolab::ref {

SpectralFunction forward_fourier(const GridFunction& u) {
  const TorusGrid& g = u.grid;
  const std::size_t L = g.lattice_size();
  SpectralFunction s{g, std::vector<cplx>(L)};
  for (std::size_t i = 0; i < L; ++i) {
    const Freq f = g.freq(i);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      const auto x = g.point(m);
      acc += u.values[m] * std::polar(1.0, -(x[0] * f.k1 + x[1] * f.k2));
    }
    s.coeffs[i] = acc / double(L);
  }
  return s;
}

GridFunction inverse_fourier(const SpectralFunction& s) {
  const TorusGrid& g = s.grid;
  const std::size_t L = g.lattice_size();
  GridFunction u{g, std::vector<cplx>(L)};
  for (std::size_t m = 0; m < L; ++m) {
    const auto x = g.point(m);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const Freq f = g.freq(i);
      acc += s.coeffs[i] * std::polar(1.0, x[0] * f.k1 + x[1] * f.k2);
    }
    u.values[m] = acc;
  }
  return u;
}

GridFunction apply_direct(const Symbol& a, const GridFunction& u) {
  const TorusGrid& g = a.grid;
  detail::check_same_grid(g, u.grid, "ref::apply_direct");
  const std::size_t L = g.lattice_size();
  const SpectralFunction uh = ref::forward_fourier(u);
  GridFunction out{g, std::vector<cplx>(L)};
  for (std::size_t m = 0; m < L; ++m) {
    const auto x = g.point(m);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const Freq f = g.freq(i);
      acc += a.samples[m * L + i] * uh.coeffs[i] *
             std::polar(1.0, x[0] * f.k1 + x[1] * f.k2);
    }
    out.values[m] = acc;
  }
  return out;
}

GridFunction maximal_function(const GridFunction& f, double t,
                              const std::vector<double>& radii) {
  const TorusGrid& g = f.grid;
  const std::size_t L = g.lattice_size();
  const int N = g.extent();
  const double h = g.spacing();
  // Ball membership must come from the wrapped integer index offsets, not
  // from subtracted point coordinates: radii that are exact lattice
  // distances (the dyadic ladder) would otherwise tie at every boundary
  // point and round either way.
  auto axis = [N](int a, int b) {
    const int d = std::abs(a - b);
    return std::min(d, N - d);
  };
  auto inside = [&](std::size_t m, std::size_t mp, double r) {
    if (g.dim() == 1) return axis(int(m), int(mp)) * h < r;
    const double d1 = axis(int(m) / N, int(mp) / N);
    const double d2 = axis(int(m) % N, int(mp) % N);
    return d1 * d1 + d2 * d2 < (r / h) * (r / h);
  };
  GridFunction out{g, std::vector<cplx>(L)};
  for (std::size_t m = 0; m < L; ++m) {
    double best = 0.0;
    for (double r : radii) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t mp = 0; mp < L; ++mp)
        if (inside(m, mp, r)) {
          sum += std::pow(std::abs(f.values[mp]), t);
          ++count;
        }
      if (count > 0) best = std::max(best, sum / double(count));
    }
    out.values[m] = std::pow(best, 1.0 / t);
  }
  return out;
}

}  // namespace pdolab::ref
