#pragma once
#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "pdolab/errors.hpp"

namespace pdolab {

using cplx = std::complex<double>;

// A point of the integer frequency lattice.  k2 is always 0 in dimension 1.
struct Freq {
  int k1 = 0;
  int k2 = 0;

  friend bool operator==(const Freq&, const Freq&) = default;
  double norm() const { return std::sqrt(double(k1) * k1 + double(k2) * k2); }
  int max_abs() const { return std::max(std::abs(k1), std::abs(k2)); }
};

// Uniform dyadic discretization of the torus [0,2pi)^n, n in {1,2}, with
// N = 2^depth points per axis.  Frequencies live on the signed lattice
// [-N/2, N/2)^n and are stored in that order (DC in the middle); spatial
// samples are stored in natural row-major order.
class TorusGrid {
 public:
  TorusGrid() = default;

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  int extent() const { return extent_; }  // N = 2^depth
  std::size_t lattice_size() const {
    std::size_t N = static_cast<std::size_t>(extent_);
    return dim_ == 2 ? N * N : N;
  }
  double spacing() const;                // 2pi / N
  double cell_volume() const;            // (2pi/N)^n, the quadrature weight

  Freq freq(std::size_t idx) const;      // lattice point of a storage index
  std::size_t index(const Freq& f) const;
  bool in_lattice(const Freq& f) const;
  std::array<double, 2> point(std::size_t m) const;  // x_m (second entry 0 in 1-D)

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  friend TorusGrid make_grid(int dim, int depth);
  int dim_ = 0;
  int depth_ = 0;
  int extent_ = 0;
};

// Validates dim in {1,2} and 3 <= depth <= 14 (dim 1) resp. 3 <= depth <= 9
// (dim 2); throws std::invalid_argument naming the violated bound otherwise.
TorusGrid make_grid(int dim, int depth);

// A function sampled at the grid points, natural row-major storage.
struct GridFunction {
  TorusGrid grid;
  std::vector<cplx> values;
};

// A coefficient table on the signed frequency lattice.
struct SpectralFunction {
  TorusGrid grid;
  std::vector<cplx> coeffs;
};

GridFunction zero_function(const TorusGrid& g);

// Subset of the frequency lattice, kept as sorted storage indices together
// with the relative threshold that produced it.
struct SupportSet {
  TorusGrid grid;
  std::vector<std::size_t> points;  // sorted ascending
  double threshold = 0.0;

  bool contains_index(std::size_t idx) const;
  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

// Coefficients hat u(kappa) = N^{-n} sum_m u(x_m) exp(-i x_m . kappa).
// A pure mode exp(i kappa0 . x) therefore has hat u(kappa0) = 1 exactly.
SpectralFunction forward_fourier(const GridFunction& u);

// Plain exponential sum u(x_m) = sum_kappa hat u(kappa) exp(i x_m . kappa);
// exact inverse of forward_fourier up to roundoff.
GridFunction inverse_fourier(const SpectralFunction& s);

// Riemann-sum L_p norm ((2pi/N)^n sum |u|^p)^{1/p}; p = infinity gives the
// max.  Valid for all 0 < p <= infinity (quasi-norms included).
double lp_norm(const GridFunction& u, double p);

// {kappa : |hat u(kappa)| > rel_threshold * max |hat u|}.  The default
// threshold recovers exact supports of ramp-based multipliers, whose values
// are exact zeros outside their transition zones.
inline constexpr double kSupportThreshold = 1e-10;
SupportSet spectral_support(const SpectralFunction& s,
                            double rel_threshold = kSupportThreshold);

// Exact arithmetic sum {alpha + beta}; throws aliasing_error as soon as one
// sum leaves the lattice, because on the discrete torus such a sum would
// otherwise wrap around and corrupt support bookkeeping.
SupportSet minkowski_sum(const SupportSet& a, const SupportSet& b);

// Fourier multiplier m(D)u for a real table m on the signed lattice.
GridFunction apply_lattice_multiplier(const std::vector<double>& m,
                                      const GridFunction& u);

namespace detail {
void check_same_grid(const TorusGrid& a, const TorusGrid& b, const char* who);
void check_size(std::size_t have, const TorusGrid& g, const char* who);
}

}  // namespace pdolab
