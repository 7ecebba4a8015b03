#include "pdolab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "pdolab/detail/fft.hpp"

namespace pdolab {

using std::numbers::pi;

double TorusGrid::spacing() const { return 2.0 * pi / extent_; }

double TorusGrid::cell_volume() const {
  const double h = spacing();
  return dim_ == 2 ? h * h : h;
}

Freq TorusGrid::freq(std::size_t idx) const {
  const int N = extent_;
  if (dim_ == 1) return Freq{int(idx) - N / 2, 0};
  return Freq{int(idx / std::size_t(N)) - N / 2, int(idx % std::size_t(N)) - N / 2};
}

std::size_t TorusGrid::index(const Freq& f) const {
  const int N = extent_;
  if (dim_ == 1) return std::size_t(f.k1 + N / 2);
  return std::size_t(f.k1 + N / 2) * N + std::size_t(f.k2 + N / 2);
}

bool TorusGrid::in_lattice(const Freq& f) const {
  const int h = extent_ / 2;
  if (f.k1 < -h || f.k1 >= h) return false;
  if (dim_ == 1) return f.k2 == 0;
  return f.k2 >= -h && f.k2 < h;
}

std::array<double, 2> TorusGrid::point(std::size_t m) const {
  const double h = spacing();
  if (dim_ == 1) return {h * double(m), 0.0};
  const std::size_t N = std::size_t(extent_);
  return {h * double(m / N), h * double(m % N)};
}

TorusGrid make_grid(int dim, int depth) {
  if (dim != 1 && dim != 2) {
    std::ostringstream os;
    os << "make_grid: dim must be 1 or 2, got " << dim;
    throw std::invalid_argument(os.str());
  }
  const int max_depth = dim == 1 ? 14 : 9;
  if (depth < 3 || depth > max_depth) {
    std::ostringstream os;
    os << "make_grid: depth must lie in [3, " << max_depth << "] for dim "
       << dim << ", got " << depth;
    throw std::invalid_argument(os.str());
  }
  TorusGrid g;
  g.dim_ = dim;
  g.depth_ = depth;
  g.extent_ = 1 << depth;
  return g;
}

GridFunction zero_function(const TorusGrid& g) {
  return GridFunction{g, std::vector<cplx>(g.lattice_size())};
}

bool SupportSet::contains_index(std::size_t idx) const {
  return std::binary_search(points.begin(), points.end(), idx);
}

namespace detail {
void check_same_grid(const TorusGrid& a, const TorusGrid& b, const char* who) {
  if (!(a == b)) {
    std::ostringstream os;
    os << who << ": operands live on different grids ((" << a.dim() << ","
       << a.depth() << ") vs (" << b.dim() << "," << b.depth() << "))";
    throw std::invalid_argument(os.str());
  }
}

void check_size(std::size_t have, const TorusGrid& g, const char* who) {
  if (have != g.lattice_size()) {
    std::ostringstream os;
    os << who << ": value table has " << have << " entries, grid needs "
       << g.lattice_size();
    throw std::invalid_argument(os.str());
  }
}
}  // namespace detail

SpectralFunction forward_fourier(const GridFunction& u) {
  detail::check_size(u.values.size(), u.grid, "forward_fourier");
  const std::size_t L = u.grid.lattice_size();
  std::vector<cplx> natural(L);
  detail::dft_forward(u.grid, u.values.data(), natural.data());
  SpectralFunction s{u.grid, std::vector<cplx>(L)};
  detail::shift_to_signed(u.grid, natural.data(), s.coeffs.data());
  const double scale = 1.0 / double(L);
  for (auto& c : s.coeffs) c *= scale;
  return s;
}

GridFunction inverse_fourier(const SpectralFunction& s) {
  detail::check_size(s.coeffs.size(), s.grid, "inverse_fourier");
  const std::size_t L = s.grid.lattice_size();
  std::vector<cplx> natural(L);
  detail::shift_to_natural(s.grid, s.coeffs.data(), natural.data());
  GridFunction u{s.grid, std::vector<cplx>(L)};
  detail::dft_backward(s.grid, natural.data(), u.values.data());
  return u;
}

double lp_norm(const GridFunction& u, double p) {
  detail::check_size(u.values.size(), u.grid, "lp_norm");
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (const auto& v : u.values) acc += std::pow(std::abs(v), p);
  return std::pow(u.grid.cell_volume() * acc, 1.0 / p);
}

SupportSet spectral_support(const SpectralFunction& s, double rel_threshold) {
  detail::check_size(s.coeffs.size(), s.grid, "spectral_support");
  if (rel_threshold < 0.0 || rel_threshold >= 1.0)
    throw std::invalid_argument("spectral_support: rel_threshold must lie in [0,1)");
  double m = 0.0;
  for (const auto& c : s.coeffs) m = std::max(m, std::abs(c));
  SupportSet out{s.grid, {}, rel_threshold};
  const double cut = rel_threshold * m;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    if (std::abs(s.coeffs[i]) > cut) out.points.push_back(i);
  return out;
}

SupportSet minkowski_sum(const SupportSet& a, const SupportSet& b) {
  detail::check_same_grid(a.grid, b.grid, "minkowski_sum");
  std::set<std::size_t> acc;
  for (std::size_t ia : a.points) {
    const Freq fa = a.grid.freq(ia);
    for (std::size_t ib : b.points) {
      const Freq fb = b.grid.freq(ib);
      const Freq sum{fa.k1 + fb.k1, fa.k2 + fb.k2};
      if (!a.grid.in_lattice(sum)) {
        std::ostringstream os;
        os << "minkowski_sum: (" << fa.k1 << "," << fa.k2 << ") + (" << fb.k1
           << "," << fb.k2 << ") = (" << sum.k1 << "," << sum.k2
           << ") falls outside the lattice [-" << a.grid.extent() / 2 << ","
           << a.grid.extent() / 2 << ")";
        throw aliasing_error(os.str());
      }
      acc.insert(a.grid.index(sum));
    }
  }
  return SupportSet{a.grid, std::vector<std::size_t>(acc.begin(), acc.end()),
                    std::max(a.threshold, b.threshold)};
}

GridFunction apply_lattice_multiplier(const std::vector<double>& m,
                                      const GridFunction& u) {
  detail::check_size(m.size(), u.grid, "apply_lattice_multiplier");
  SpectralFunction s = forward_fourier(u);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] *= m[i];
  return inverse_fourier(s);
}

}  // namespace pdolab
