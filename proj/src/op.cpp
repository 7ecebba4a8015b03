#include "pdolab/op.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "pdolab/detail/fft.hpp"

namespace pdolab {

namespace {

// W[t] = exp(2 pi i t / N); every phase x_m . kappa is an exact multiple of
// 2 pi / N, so reducing the integer product mod N keeps the twiddles exact
// for arbitrarily large |kappa| and drift-free across grid sizes.
std::vector<cplx> twiddle_table(const TorusGrid& g) {
  const int N = g.extent();
  std::vector<cplx> W(N);
  for (int t = 0; t < N; ++t)
    W[t] = std::polar(1.0, 2.0 * std::numbers::pi * double(t) / double(N));
  return W;
}

inline std::size_t phase_index(const TorusGrid& g, std::size_t m, const Freq& f) {
  const long long N = g.extent();
  long long t;
  if (g.dim() == 1) {
    t = (long long)(m)*f.k1 % N;
  } else {
    const long long m1 = (long long)(m) / N, m2 = (long long)(m) % N;
    t = (m1 * f.k1 + m2 * f.k2) % N;
  }
  return std::size_t(t < 0 ? t + N : t);
}

// out[m] += sum over listed frequency entries of F[m, i] v[i] e^{i x_m kappa_i}
void accumulate_rows(const TorusGrid& g, const std::vector<cplx>& F,
                     const std::vector<std::pair<std::size_t, cplx>>& freqs,
                     GridFunction& out) {
  const std::size_t L = g.lattice_size();
  const std::vector<cplx> tw = twiddle_table(g);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
    cplx acc = 0.0;
    const cplx* row = F.data() + std::size_t(m) * L;
    for (const auto& [i, v] : freqs)
      acc += row[i] * v * tw[phase_index(g, std::size_t(m), g.freq(i))];
    out.values[std::size_t(m)] += acc;
  }
}

}  // namespace

GridFunction apply_direct(const Symbol& a, const GridFunction& u) {
  detail::check_same_grid(a.grid, u.grid, "apply_direct");
  detail::check_size(u.values.size(), u.grid, "apply_direct");
  const TorusGrid& g = u.grid;
  const std::size_t L = g.lattice_size();
  if (a.samples.size() != L * L)
    throw std::invalid_argument("apply_direct: symbol table size mismatch");
  SpectralFunction uhat = forward_fourier(u);
  const std::vector<cplx> tw = twiddle_table(g);
  GridFunction out = zero_function(g);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
    const cplx* row = a.samples.data() + std::size_t(m) * L;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < L; ++i)
      acc += row[i] * uhat.coeffs[i] * tw[phase_index(g, std::size_t(m), g.freq(i))];
    out.values[std::size_t(m)] = acc;
  }
  return out;
}

namespace {

// x-spectrum shell filter: rebuilds the sample table with the row weights w
// applied to hat a(., eta) for every eta.
void row_filtered(const TorusGrid& g, const SymbolSpectrum& spec,
                  const std::vector<double>& w, std::vector<cplx>& out) {
  const std::size_t L = g.lattice_size();
  out.assign(L * L, cplx(0.0));
#pragma omp parallel
  {
    std::vector<cplx> sig(L), nat(L), col(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(L); ++i) {
      bool any = false;
      for (std::size_t ixi = 0; ixi < L; ++ixi) {
        const cplx v = spec.values[ixi * L + i] * w[ixi];
        sig[ixi] = v;
        any = any || v != cplx(0.0);
      }
      if (!any) continue;
      detail::shift_to_natural(g, sig.data(), nat.data());
      detail::dft_backward(g, nat.data(), col.data());
      for (std::size_t m = 0; m < L; ++m) out[m * L + i] = col[m];
    }
  }
}

std::vector<std::pair<std::size_t, cplx>> masked_coeffs(
    const LPPartition& P, int k, const SpectralFunction& uhat) {
  std::vector<std::pair<std::size_t, cplx>> out;
  if (k < 0) return out;
  for (std::size_t i : P.supports[k])
    out.emplace_back(i, P.blocks[k][i] * uhat.coeffs[i]);
  return out;
}

}  // namespace

GridFunction SplitResult::total() const {
  GridFunction t = low_high;
  for (std::size_t m = 0; m < t.values.size(); ++m)
    t.values[m] += diagonal.values[m] + high_low.values[m];
  return t;
}

SplitResult apply_split(const Symbol& a, const GridFunction& u,
                        const LPPartition& P) {
  detail::check_same_grid(a.grid, u.grid, "apply_split");
  detail::check_same_grid(a.grid, P.grid, "apply_split");
  const TorusGrid& g = a.grid;
  const std::size_t L = g.lattice_size();
  if (a.samples.size() != L * L)
    throw std::invalid_argument("apply_split: symbol table size mismatch");
  const int jmax = P.jmax;

  SpectralFunction uhat = forward_fourier(u);
  SymbolSpectrum spec = symbol_spectrum(a);

  SplitResult r;
  r.low_high = zero_function(g);
  r.diagonal = zero_function(g);
  r.high_low = zero_function(g);
  r.low_high_terms.assign(jmax + 1, zero_function(g));
  r.diagonal_terms.assign(jmax + 1, zero_function(g));
  r.high_low_terms.assign(jmax + 1, zero_function(g));

  // rolling window of x-shell-filtered symbols G_j for j in {k-2,...,k+1}
  // plus the running cumulative filter sum_{j <= k-2} G_j
  std::vector<std::vector<cplx>> window(jmax + 2);
  auto G = [&](int j) -> std::vector<cplx>& { return window[j]; };
  std::vector<cplx> cum(L * L, cplx(0.0));

  row_filtered(g, spec, P.blocks[0], G(0));
  if (jmax >= 1) row_filtered(g, spec, P.blocks[1], G(1));

  for (int k = 0; k <= jmax; ++k) {
    if (k + 1 <= jmax && G(k + 1).empty())
      row_filtered(g, spec, P.blocks[k + 1], G(k + 1));

    const auto uk = masked_coeffs(P, k, uhat);

    // low_high: cumulative filter through shell k-2 against input shell k
    if (k >= 2) {
      std::vector<cplx>& gk2 = G(k - 2);
      for (std::size_t t = 0; t < cum.size(); ++t) cum[t] += gk2[t];
      gk2.clear();
      gk2.shrink_to_fit();
      accumulate_rows(g, cum, uk, r.low_high_terms[k]);
    }

    // diagonal: shells k-1, k, k+1 against input shell k
    for (int j = std::max(0, k - 1); j <= std::min(jmax, k + 1); ++j)
      accumulate_rows(g, G(j), uk, r.diagonal_terms[k]);

    // high_low: shell k against input low-passed through k-2
    if (k >= 2) {
      std::vector<std::pair<std::size_t, cplx>> low;
      const std::vector<double> psi = P.low_pass(k - 2);
      for (std::size_t i = 0; i < L; ++i)
        if (psi[i] != 0.0) low.emplace_back(i, psi[i] * uhat.coeffs[i]);
      accumulate_rows(g, G(k), low, r.high_low_terms[k]);
    }
  }

  for (int k = 0; k <= jmax; ++k)
    for (std::size_t m = 0; m < L; ++m) {
      r.low_high.values[m] += r.low_high_terms[k].values[m];
      r.diagonal.values[m] += r.diagonal_terms[k].values[m];
      r.high_low.values[m] += r.high_low_terms[k].values[m];
    }
  return r;
}

GridFunction kernel_apply(const BlockSymbol& b, const GridFunction& u) {
  detail::check_same_grid(b.sym.grid, u.grid, "kernel_apply");
  const TorusGrid& g = u.grid;
  const std::size_t L = g.lattice_size();
  const int N = g.extent();
  if (b.sym.samples.size() != L * L)
    throw std::invalid_argument("kernel_apply: symbol table size mismatch");

  GridFunction out = zero_function(g);
  const double scale = 1.0 / double(L);
#pragma omp parallel
  {
    std::vector<cplx> sig(L), nat(L), K(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
      // K_m(z) on the grid of displacements z
      for (std::size_t i = 0; i < L; ++i)
        sig[i] = b.sym.samples[std::size_t(m) * L + i];
      detail::shift_to_natural(g, sig.data(), nat.data());
      detail::dft_backward(g, nat.data(), K.data());
      // convolution sum over source points
      cplx acc = 0.0;
      if (g.dim() == 1) {
        for (std::size_t mp = 0; mp < L; ++mp) {
          const std::size_t z = (std::size_t(m) + L - mp) % L;
          acc += u.values[mp] * K[z];
        }
      } else {
        const std::size_t m1 = std::size_t(m) / N, m2 = std::size_t(m) % N;
        for (std::size_t mp = 0; mp < L; ++mp) {
          const std::size_t p1 = mp / N, p2 = mp % N;
          const std::size_t z1 = (m1 + N - p1) % N, z2 = (m2 + N - p2) % N;
          acc += u.values[mp] * K[z1 * N + z2];
        }
      }
      out.values[std::size_t(m)] = acc * scale;
    }
  }
  return out;
}

Eigen::MatrixXcd operator_matrix(const Symbol& a) {
  const TorusGrid& g = a.grid;
  const std::size_t L = g.lattice_size();
  if (a.samples.size() != L * L)
    throw std::invalid_argument("operator_matrix: symbol table size mismatch");
  if (L > 256) {
    std::ostringstream os;
    os << "operator_matrix: " << L
       << " spatial points exceed the dense-matrix guard of 256";
    throw resource_error(os.str());
  }
  const int N = g.extent();
  Eigen::MatrixXcd A(L, L);
  const double scale = 1.0 / double(L);
  std::vector<cplx> sig(L), nat(L), K(L);
  for (std::size_t m = 0; m < L; ++m) {
    for (std::size_t i = 0; i < L; ++i) sig[i] = a.samples[m * L + i];
    detail::shift_to_natural(g, sig.data(), nat.data());
    detail::dft_backward(g, nat.data(), K.data());
    if (g.dim() == 1) {
      for (std::size_t mp = 0; mp < L; ++mp)
        A(m, mp) = K[(m + L - mp) % L] * scale;
    } else {
      const std::size_t m1 = m / N, m2 = m % N;
      for (std::size_t mp = 0; mp < L; ++mp) {
        const std::size_t p1 = mp / N, p2 = mp % N;
        A(m, mp) = K[((m1 + N - p1) % N) * N + (m2 + N - p2) % N] * scale;
      }
    }
  }
  return A;
}

double operator_norm_l2(const Symbol& a) {
  Eigen::MatrixXcd A = operator_matrix(a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

std::string split_result_csv(const SplitResult& s) {
  const TorusGrid& g = s.low_high.grid;
  std::ostringstream os;
  os << "index,x1,x2,low_high_re,low_high_im,diagonal_re,diagonal_im,"
        "high_low_re,high_low_im\n";
  char buf[256];
  for (std::size_t m = 0; m < g.lattice_size(); ++m) {
    const auto x = g.point(m);
    std::snprintf(buf, sizeof buf,
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m,
                  x[0], x[1], s.low_high.values[m].real(),
                  s.low_high.values[m].imag(), s.diagonal.values[m].real(),
                  s.diagonal.values[m].imag(), s.high_low.values[m].real(),
                  s.high_low.values[m].imag());
    os << buf;
  }
  return os.str();
}

}  // namespace pdolab
