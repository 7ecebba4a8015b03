#include "pdolab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pdolab/op.hpp"

namespace pdolab {

namespace {

void check_params(const TorusGrid& g, const MaximalParams& mp) {
  if (!(mp.t > 0.0) || mp.t > 1.0)
    throw std::invalid_argument("maximal_function: t must lie in (0, 1]");
  if (mp.radii.empty())
    throw std::invalid_argument("maximal_function: radius list is empty");
  const double eps = 1e-12;
  if (mp.radii.front() < g.spacing() * (1.0 - eps))
    throw std::invalid_argument(
        "maximal_function: smallest radius is below one grid spacing");
  if (mp.radii.back() > std::numbers::pi * (1.0 + eps))
    throw std::invalid_argument(
        "maximal_function: largest radius exceeds the half-period pi");
  for (std::size_t i = 1; i < mp.radii.size(); ++i)
    if (!(mp.radii[i] > mp.radii[i - 1]))
      throw std::invalid_argument(
          "maximal_function: radii must be strictly increasing");
}

// |f|^t with cheap paths for the two exponents the experiments use
std::vector<double> power_table(const std::vector<cplx>& v, double t) {
  std::vector<double> pw(v.size());
  if (t == 1.0) {
    for (std::size_t i = 0; i < v.size(); ++i) pw[i] = std::abs(v[i]);
  } else if (t == 0.5) {
    for (std::size_t i = 0; i < v.size(); ++i)
      pw[i] = std::sqrt(std::abs(v[i]));
  } else {
    for (std::size_t i = 0; i < v.size(); ++i)
      pw[i] = std::pow(std::abs(v[i]), t);
  }
  return pw;
}

double unpower(double a, double t) {
  if (t == 1.0) return a;
  if (t == 0.5) return a * a;
  return std::pow(a, 1.0 / t);
}

// wrapped per-axis distance |d| on Z_N, in grid steps
inline int axis_dist(int d, int N) { return std::min(d, N - d); }

}  // namespace

std::vector<double> dyadic_radii(const TorusGrid& g) {
  std::vector<double> r(g.depth());
  for (int m = 0; m < g.depth(); ++m)
    r[m] = std::ldexp(g.spacing(), m);
  return r;
}

MaximalParams dyadic_params(const TorusGrid& g, double t) {
  return MaximalParams{t, dyadic_radii(g)};
}

GridFunction maximal_function(const GridFunction& f, const MaximalParams& mp) {
  const TorusGrid& g = f.grid;
  detail::check_size(f.values.size(), g, "maximal_function");
  check_params(g, mp);
  const int N = g.extent();
  const std::size_t L = g.lattice_size();
  const double h = g.spacing();

  const std::vector<double> pw = power_table(f.values, mp.t);
  std::vector<double> best(L, 0.0);

  for (double r : mp.radii) {
    if (g.dim() == 1) {
      std::vector<int> offs;
      for (int d = 0; d < N; ++d)
        if (axis_dist(d, N) * h < r) offs.push_back(d);
      const double inv = 1.0 / double(offs.size());
#pragma omp parallel for schedule(static)
      for (int m = 0; m < N; ++m) {
        double s = 0.0;
        for (int d : offs) {
          const int i = m + d;
          s += pw[i >= N ? i - N : i];
        }
        best[m] = std::max(best[m], s * inv);
      }
    } else {
      std::vector<std::pair<int, int>> offs;
      const double r2 = (r / h) * (r / h);
      for (int d1 = 0; d1 < N; ++d1) {
        const double a1 = double(axis_dist(d1, N));
        for (int d2 = 0; d2 < N; ++d2) {
          const double a2 = double(axis_dist(d2, N));
          if (a1 * a1 + a2 * a2 < r2) offs.emplace_back(d1, d2);
        }
      }
      const double inv = 1.0 / double(offs.size());
#pragma omp parallel for schedule(static)
      for (int m1 = 0; m1 < N; ++m1)
        for (int m2 = 0; m2 < N; ++m2) {
          double s = 0.0;
          for (const auto& [d1, d2] : offs) {
            const int i1 = m1 + d1 >= N ? m1 + d1 - N : m1 + d1;
            const int i2 = m2 + d2 >= N ? m2 + d2 - N : m2 + d2;
            s += pw[std::size_t(i1) * N + i2];
          }
          const std::size_t m = std::size_t(m1) * N + m2;
          best[m] = std::max(best[m], s * inv);
        }
    }
  }

  GridFunction out = zero_function(g);
  for (std::size_t m = 0; m < L; ++m)
    out.values[m] = unpower(best[m], mp.t);
  return out;
}

namespace {

void check_ball_support(const TorusGrid& g, const std::vector<cplx>& coeffs,
                        std::size_t stride, std::size_t count, double R,
                        const char* what) {
  double mx = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    mx = std::max(mx, std::abs(coeffs[i * stride]));
  const double cut = kSupportThreshold * mx;
  for (std::size_t i = 0; i < count; ++i) {
    if (std::abs(coeffs[i * stride]) <= cut) continue;
    if (g.freq(i).norm() > R) {
      std::ostringstream os;
      os << "pointwise_estimate_ratio: " << what
         << " carries mass at |kappa| = " << g.freq(i).norm() << " > 2^k = "
         << R;
      throw std::invalid_argument(os.str());
    }
  }
}

}  // namespace

double pointwise_estimate_ratio(const Symbol& b, const GridFunction& v, int k,
                                double t) {
  const TorusGrid& g = b.grid;
  detail::check_same_grid(g, v.grid, "pointwise_estimate_ratio");
  if (k < 0 || k > g.depth() - 2)
    throw std::invalid_argument(
        "pointwise_estimate_ratio: need 0 <= k <= depth - 2");
  if (!(t > 0.0) || t > 1.0)
    throw std::invalid_argument("pointwise_estimate_ratio: t must lie in (0, 1]");
  const std::size_t L = g.lattice_size();
  const double R = std::ldexp(1.0, k);

  SpectralFunction vh = forward_fourier(v);
  check_ball_support(g, vh.coeffs, 1, L, R, "the input spectrum");

  SymbolSpectrum bs = symbol_spectrum(b);
  // row ixi of the spectrum table holds hat b(xi, .): test the rows
  {
    std::vector<double> rowmax(L, 0.0);
    for (std::size_t ixi = 0; ixi < L; ++ixi)
      for (std::size_t ieta = 0; ieta < L; ++ieta)
        rowmax[ixi] =
            std::max(rowmax[ixi], std::abs(bs.values[ixi * L + ieta]));
    double mx = 0.0;
    for (double r : rowmax) mx = std::max(mx, r);
    for (std::size_t ixi = 0; ixi < L; ++ixi)
      if (rowmax[ixi] > kSupportThreshold * mx && g.freq(ixi).norm() > R) {
        std::ostringstream os;
        os << "pointwise_estimate_ratio: the symbol x-spectrum carries mass "
              "at |xi| = "
           << g.freq(ixi).norm() << " > 2^k = " << R;
        throw std::invalid_argument(os.str());
      }
  }

  GridFunction num = apply_direct(b, v);
  GridFunction M = maximal_function(v, dyadic_params(g, t));

  // frequency columns that actually carry symbol mass
  double amax = 0.0;
  for (const cplx& s : b.samples) amax = std::max(amax, std::abs(s));
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < L; ++i) {
    bool keep = false;
    for (std::size_t m = 0; m < L && !keep; ++m)
      keep = std::abs(b.samples[m * L + i]) > kSupportThreshold * amax;
    if (keep) cols.push_back(i);
  }

  HomBesovEvaluator ev(g, std::ldexp(1.0, -k));
  std::vector<double> denom(L);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
    const HomBesovResult r =
        ev.norm(std::span<const cplx>(b.samples).subspan(std::size_t(m) * L, L),
                t, false, cols);
    denom[std::size_t(m)] = r.value * M.values[std::size_t(m)].real();
  }

  double scale = 0.0;
  for (double d : denom) scale = std::max(scale, d);
  const double cut = 1e-14 * scale;
  double ratio = 0.0;
  for (std::size_t m = 0; m < L; ++m)
    if (denom[m] > cut)
      ratio = std::max(ratio, std::abs(num.values[m]) / denom[m]);
  return ratio;
}

double vector_maximal_check(const GridFunction& u, const LPPartition& P,
                            double p, double t) {
  const TorusGrid& g = u.grid;
  detail::check_same_grid(g, P.grid, "vector_maximal_check");
  if (!(t > 0.0) || t >= 1.0)
    throw std::invalid_argument(
        "vector_maximal_check: t must lie in (0, 1); the vector maximal "
        "inequality needs dim/t < dim + 1");
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument(
        "vector_maximal_check: p must lie in [1, infinity)");

  GridFunction sum_max = zero_function(g);
  GridFunction sum_abs = zero_function(g);
  const MaximalParams mp = dyadic_params(g, t);
  for (int k = 0; k <= P.jmax; ++k) {
    GridFunction uk = lp_block(u, P, k);
    GridFunction Mk = maximal_function(uk, mp);
    for (std::size_t m = 0; m < g.lattice_size(); ++m) {
      sum_max.values[m] += Mk.values[m].real();
      sum_abs.values[m] += std::abs(uk.values[m]);
    }
  }
  const double den = lp_norm(sum_abs, p);
  return den == 0.0 ? 0.0 : lp_norm(sum_max, p) / den;
}

}  // namespace pdolab
