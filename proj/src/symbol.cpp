#include "pdolab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pdolab/detail/fft.hpp"
#include "pdolab/ramp.hpp"

namespace pdolab {

namespace {

constexpr std::size_t kMaxSymbolEntries = std::size_t(1) << 26;

void check_symbol_size(const TorusGrid& g, const char* who) {
  const std::size_t L = g.lattice_size();
  if (L > kMaxSymbolEntries / L) {
    std::ostringstream os;
    os << who << ": dense symbol table on this grid needs " << L << "^2 entries; "
       << "the guard allows at most 2^26";
    throw resource_error(os.str());
  }
}

void check_is_symbol(const Symbol& a, const char* who) {
  const std::size_t L = a.grid.lattice_size();
  if (a.samples.size() != L * L) {
    std::ostringstream os;
    os << who << ": symbol table has " << a.samples.size() << " entries, grid needs "
       << L * L;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Symbol zero_symbol(const TorusGrid& g, double order, double rho, double delta) {
  check_symbol_size(g, "zero_symbol");
  const std::size_t L = g.lattice_size();
  return Symbol{g, std::vector<cplx>(L * L), order, rho, delta, std::nullopt};
}

SymbolSpectrum symbol_spectrum(const Symbol& a) {
  check_is_symbol(a, "symbol_spectrum");
  const TorusGrid& g = a.grid;
  const std::size_t L = g.lattice_size();
  SymbolSpectrum s{g, std::vector<cplx>(L * L)};
  const double scale = 1.0 / double(L);
#pragma omp parallel
  {
    std::vector<cplx> col(L), nat(L), sig(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(L); ++i) {
      for (std::size_t m = 0; m < L; ++m) col[m] = a.samples[m * L + i];
      detail::dft_forward(g, col.data(), nat.data());
      detail::shift_to_signed(g, nat.data(), sig.data());
      for (std::size_t ixi = 0; ixi < L; ++ixi)
        s.values[ixi * L + i] = sig[ixi] * scale;
    }
  }
  return s;
}

Symbol symbol_from_spectrum(const SymbolSpectrum& s, double order, double rho,
                            double delta) {
  const TorusGrid& g = s.grid;
  const std::size_t L = g.lattice_size();
  if (s.values.size() != L * L)
    throw std::invalid_argument("symbol_from_spectrum: table size mismatch");
  Symbol a = zero_symbol(g, order, rho, delta);
#pragma omp parallel
  {
    std::vector<cplx> sig(L), nat(L), col(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(L); ++i) {
      for (std::size_t ixi = 0; ixi < L; ++ixi) sig[ixi] = s.values[ixi * L + i];
      detail::shift_to_natural(g, sig.data(), nat.data());
      detail::dft_backward(g, nat.data(), col.data());
      for (std::size_t m = 0; m < L; ++m) a.samples[m * L + i] = col[m];
    }
  }
  return a;
}

Symbol multiplier_symbol(const TorusGrid& g, const std::vector<cplx>& m,
                         double order) {
  detail::check_size(m.size(), g, "multiplier_symbol");
  Symbol a = zero_symbol(g, order, 1.0, 0.0);
  const std::size_t L = g.lattice_size();
  for (std::size_t mm = 0; mm < L; ++mm)
    std::copy(m.begin(), m.end(), a.samples.begin() + mm * L);
  return a;
}

Symbol elementary_symbol(const GridFunction& gfun, const std::vector<cplx>& m,
                         double order) {
  detail::check_size(gfun.values.size(), gfun.grid, "elementary_symbol");
  detail::check_size(m.size(), gfun.grid, "elementary_symbol");
  Symbol a = zero_symbol(gfun.grid, order, 1.0, 1.0);
  const std::size_t L = gfun.grid.lattice_size();
  for (std::size_t mm = 0; mm < L; ++mm)
    for (std::size_t i = 0; i < L; ++i)
      a.samples[mm * L + i] = gfun.values[mm] * m[i];
  return a;
}

Symbol bracket_symbol(const TorusGrid& g, double order) {
  std::vector<cplx> m(g.lattice_size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = g.freq(i).norm();
    m[i] = std::pow(1.0 + r * r, order / 2.0);
  }
  Symbol a = multiplier_symbol(g, m, order);
  a.rho = 1.0;
  a.delta = 0.0;
  return a;
}

Symbol ching_symbol(const TorusGrid& g, double r, int block_lo, int block_hi,
                    const std::vector<double>& coeffs) {
  if (!(r > 0.0) || r > 1.0)
    throw std::invalid_argument("ching_symbol: modulation ratio r must lie in (0,1]");
  if (block_lo < 0 || block_hi < block_lo)
    throw std::invalid_argument("ching_symbol: need 0 <= block_lo <= block_hi");
  if (!coeffs.empty() && int(coeffs.size()) != block_hi - block_lo + 1)
    throw std::invalid_argument("ching_symbol: coeffs size must match the block range");
  const int N = g.extent();
  const double reach = (1.0 + std::max(r, 0.25)) * std::ldexp(1.0, block_hi);
  if (reach > N / 4.0 + 1e-9) {
    std::ostringstream os;
    os << "ching_symbol: top block " << block_hi << " reaches frequency " << reach
       << " > N/4 = " << N / 4 << "; refine the grid or truncate";
    throw std::invalid_argument(os.str());
  }
  for (int j = block_lo; j <= block_hi; ++j) {
    const double lam = r * std::ldexp(1.0, j);
    if (std::abs(lam - std::round(lam)) > 1e-9) {
      std::ostringstream os;
      os << "ching_symbol: modulation r*2^" << j << " = " << lam
         << " is not an integer lattice frequency";
      throw std::invalid_argument(os.str());
    }
  }

  Symbol a = zero_symbol(g, 0.0, 1.0, 1.0);
  const std::size_t L = g.lattice_size();
  for (int j = block_lo; j <= block_hi; ++j) {
    const double c = coeffs.empty() ? 1.0 : coeffs[j - block_lo];
    const double rad = std::ldexp(1.0, j - 2);
    const long lam = std::lround(r * std::ldexp(1.0, j));
    const long ctr = 1L << j;
    // bump window around 2^j e_1
    std::vector<std::pair<std::size_t, double>> window;
    for (std::size_t i = 0; i < L; ++i) {
      const Freq f = g.freq(i);
      const double d1 = double(f.k1 - ctr);
      const double dist = std::sqrt(d1 * d1 + double(f.k2) * f.k2);
      const double chi = radial_bump(dist / rad);
      if (chi > 0.0) window.emplace_back(i, chi);
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
      const cplx mod = c * std::polar(1.0, -double(lam) * g.point(m)[0]);
      for (const auto& [i, chi] : window) a.samples[m * L + i] += mod * chi;
    }
  }
  return a;
}

double SeminormTable::at(std::array<int, 2> alpha, std::array<int, 2> beta) const {
  const int na = alpha_max + 1, nb = beta_max + 1;
  auto flat = [&](std::array<int, 2> mi, int width) {
    return dim == 1 ? mi[0] : mi[0] * width + mi[1];
  };
  return values[std::size_t(flat(alpha, na)) * (dim == 1 ? nb : nb * nb) +
                flat(beta, nb)];
}

double SeminormTable::max() const {
  return *std::max_element(values.begin(), values.end());
}

namespace {

// Central difference along one eta axis with unit step h_eta; entries whose
// stencil leaves the lattice are poisoned with NaN so they drop out of any
// later sup/L1 restricted to valid stencils.
void eta_central_diff(const TorusGrid& g, std::vector<cplx>& table,
                      std::size_t rows, int axis, double step) {
  const std::size_t L = g.lattice_size();
  std::vector<cplx> out(table.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t m = 0; m < rows; ++m) {
    const cplx* in = table.data() + m * L;
    cplx* o = out.data() + m * L;
    for (std::size_t i = 0; i < L; ++i) {
      const Freq f = g.freq(i);
      Freq up = f, dn = f;
      (axis == 0 ? up.k1 : up.k2) += 1;
      (axis == 0 ? dn.k1 : dn.k2) -= 1;
      if (!g.in_lattice(up) || !g.in_lattice(dn)) {
        o[i] = cplx(nan, nan);
        continue;
      }
      o[i] = (in[g.index(up)] - in[g.index(dn)]) / (2.0 * step);
    }
  }
  table.swap(out);
}

bool usable(const cplx& v) {
  return !std::isnan(v.real()) && !std::isnan(v.imag());
}

std::vector<std::array<int, 2>> component_multis(int dim, int cap) {
  std::vector<std::array<int, 2>> out;
  for (int a1 = 0; a1 <= cap; ++a1) {
    if (dim == 1) {
      out.push_back({a1, 0});
    } else {
      for (int a2 = 0; a2 <= cap; ++a2) out.push_back({a1, a2});
    }
  }
  return out;
}

}  // namespace

SeminormTable seminorm_estimate(const Symbol& a, int alpha_max, int beta_max) {
  check_is_symbol(a, "seminorm_estimate");
  const TorusGrid& g = a.grid;
  const int n = g.dim();
  if (alpha_max < 0 || alpha_max > n + 1)
    throw std::invalid_argument("seminorm_estimate: alpha_max must lie in [0, dim+1]");
  if (beta_max < 0 || beta_max > n + 1)
    throw std::invalid_argument("seminorm_estimate: beta_max must lie in [0, dim+1]");

  const std::size_t L = g.lattice_size();
  const auto alphas = component_multis(n, alpha_max);
  const auto betas = component_multis(n, beta_max);
  SeminormTable T;
  T.dim = n;
  T.alpha_max = alpha_max;
  T.beta_max = beta_max;
  T.values.assign(alphas.size() * betas.size(), 0.0);

  SymbolSpectrum spec = symbol_spectrum(a);
  const double quarter = g.extent() / 4.0;

  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    const auto beta = betas[bi];
    // exact spectral derivative D^beta_x
    std::vector<cplx> field;
    if (beta[0] == 0 && beta[1] == 0) {
      field = a.samples;
    } else {
      SymbolSpectrum ds{g, spec.values};
      for (std::size_t ixi = 0; ixi < L; ++ixi) {
        const Freq f = g.freq(ixi);
        cplx w = 1.0;
        for (int b = 0; b < beta[0]; ++b) w *= cplx(0.0, double(f.k1));
        for (int b = 0; b < beta[1]; ++b) w *= cplx(0.0, double(f.k2));
        for (std::size_t i = 0; i < L; ++i) ds.values[ixi * L + i] *= w;
      }
      field = symbol_from_spectrum(ds).samples;
    }

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const auto alpha = alphas[ai];
      std::vector<cplx> table = field;
      for (int d = 0; d < alpha[0]; ++d) eta_central_diff(g, table, L, 0, 1.0);
      for (int d = 0; d < alpha[1]; ++d) eta_central_diff(g, table, L, 1, 1.0);

      const double expo =
          a.order - a.rho * (alpha[0] + alpha[1]) + a.delta * (beta[0] + beta[1]);
      double sup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup)
      for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
        for (std::size_t i = 0; i < L; ++i) {
          const Freq f = g.freq(i);
          if (f.norm() > quarter) continue;
          const cplx v = table[std::size_t(m) * L + i];
          if (!usable(v)) continue;
          const double w = std::pow(1.0 + f.norm(), -expo);
          sup = std::max(sup, std::abs(v) * w);
        }
      }
      T.values[ai * betas.size() + bi] = sup;
    }
  }
  return T;
}

namespace {

struct SupportEntry {
  std::size_t ixi, ieta;
  double mag;
};

std::vector<SupportEntry> spectrum_support(const SymbolSpectrum& s,
                                           double rel_threshold) {
  const std::size_t L = s.grid.lattice_size();
  double mx = 0.0;
  for (const auto& v : s.values) mx = std::max(mx, std::abs(v));
  const double cut = rel_threshold * mx;
  std::vector<SupportEntry> out;
  for (std::size_t ixi = 0; ixi < L; ++ixi)
    for (std::size_t ieta = 0; ieta < L; ++ieta) {
      const double m = std::abs(s.values[ixi * L + ieta]);
      if (m > cut) out.push_back({ixi, ieta, m});
    }
  return out;
}

double twisted_ratio(const TorusGrid& g, std::size_t ixi, std::size_t ieta) {
  const Freq xi = g.freq(ixi), eta = g.freq(ieta);
  const double sum = std::sqrt(double(xi.k1 + eta.k1) * (xi.k1 + eta.k1) +
                               double(xi.k2 + eta.k2) * (xi.k2 + eta.k2));
  return eta.norm() / (sum + 1.0);
}

}  // namespace

TwistedDiagonalReport twisted_diagonal_check(const Symbol& a, double C,
                                             double rel_threshold) {
  check_is_symbol(a, "twisted_diagonal_check");
  if (!(C >= 1.0))
    throw std::invalid_argument("twisted_diagonal_check: C must be >= 1");
  SymbolSpectrum s = symbol_spectrum(a);
  TwistedDiagonalReport rep;
  rep.claimed_C = C;
  std::vector<TwistedViolation> all;
  for (const SupportEntry& e : spectrum_support(s, rel_threshold)) {
    ++rep.support_pairs;
    const Freq xi = s.grid.freq(e.ixi), eta = s.grid.freq(e.ieta);
    const double ratio = twisted_ratio(s.grid, e.ixi, e.ieta);
    // violation iff C (|xi+eta| + 1) <= |eta|, i.e. ratio >= C
    if (ratio >= C) all.push_back({xi, eta, e.mag, ratio});
  }
  std::sort(all.begin(), all.end(),
            [](const TwistedViolation& a_, const TwistedViolation& b_) {
              return a_.magnitude > b_.magnitude;
            });
  if (all.size() > 8) all.resize(8);
  rep.violations = std::move(all);
  rep.pass = rep.violations.empty();
  return rep;
}

TwistedDiagonalFit twisted_diagonal_fit(const Symbol& a, double rel_threshold) {
  check_is_symbol(a, "twisted_diagonal_fit");
  SymbolSpectrum s = symbol_spectrum(a);
  TwistedDiagonalFit fit;
  for (const SupportEntry& e : spectrum_support(s, rel_threshold)) {
    const double ratio = twisted_ratio(s.grid, e.ixi, e.ieta);
    if (ratio > fit.max_ratio) {
      fit.max_ratio = ratio;
      fit.arg_xi = s.grid.freq(e.ixi);
      fit.arg_eta = s.grid.freq(e.ieta);
    }
  }
  fit.c_min = std::max(1.0, fit.max_ratio);
  return fit;
}

BlockSymbol symbol_block(const Symbol& a, const LPPartition& P, int j, int k) {
  check_is_symbol(a, "symbol_block");
  detail::check_same_grid(a.grid, P.grid, "symbol_block");
  if (j < 0 || j > P.jmax || k < 0 || k > P.jmax)
    throw std::invalid_argument("symbol_block: block indices outside [0, jmax]");
  const TorusGrid& g = a.grid;
  const std::size_t L = g.lattice_size();
  SymbolSpectrum spec = symbol_spectrum(a);
  BlockSymbol out{j, k, zero_symbol(g, a.order, a.rho, a.delta)};
  out.sym.twisted_constant = a.twisted_constant;
  const std::vector<double>& xw = P.blocks[j];
  const std::vector<double>& ew = P.blocks[k];
#pragma omp parallel
  {
    std::vector<cplx> sig(L), nat(L), col(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(L); ++i) {
      if (ew[i] == 0.0) continue;  // column entirely masked
      for (std::size_t ixi = 0; ixi < L; ++ixi)
        sig[ixi] = spec.values[ixi * L + i] * xw[ixi];
      detail::shift_to_natural(g, sig.data(), nat.data());
      detail::dft_backward(g, nat.data(), col.data());
      for (std::size_t m = 0; m < L; ++m)
        out.sym.samples[m * L + i] = col[m] * ew[i];
    }
  }
  return out;
}

namespace {

// sum over |alpha| <= dim+1 of L1 of the iterated central difference of one
// slice row, mesh step h; stencils that leave the lattice are skipped.
double slice_sobolev(const TorusGrid& g, const cplx* row, double h) {
  const int n = g.dim();
  const std::size_t L = g.lattice_size();
  const double cell = std::pow(h, n);
  double total = 0.0;
  for (int a1 = 0; a1 <= n + 1; ++a1)
    for (int a2 = 0; a2 <= (n == 2 ? n + 1 - a1 : 0); ++a2) {
      std::vector<cplx> table(row, row + L);
      for (int d = 0; d < a1; ++d) eta_central_diff(g, table, 1, 0, h);
      for (int d = 0; d < a2; ++d) eta_central_diff(g, table, 1, 1, h);
      double l1 = 0.0;
      for (std::size_t i = 0; i < L; ++i)
        if (usable(table[i])) l1 += std::abs(table[i]);
      total += cell * l1;
    }
  return total;
}

}  // namespace

SliceNormResult rescaled_slice_norm(const Symbol& a, const LPPartition& P,
                                    int k, double t) {
  check_is_symbol(a, "rescaled_slice_norm");
  detail::check_same_grid(a.grid, P.grid, "rescaled_slice_norm");
  if (k < 2 || k > P.jmax - 1) {
    std::ostringstream os;
    os << "rescaled_slice_norm: k = " << k << " outside [2, " << P.jmax - 1 << "]";
    throw std::invalid_argument(os.str());
  }
  const TorusGrid& g = a.grid;
  const std::size_t L = g.lattice_size();
  const double h = std::ldexp(1.0, -k);

  // low-pass the x-spectrum at scale k-2, then mask eta by the broadened block
  SymbolSpectrum spec = symbol_spectrum(a);
  const std::vector<double> psi = P.low_pass(k - 2);
  const std::vector<double> wide = P.broadened(k);
  std::vector<cplx> filtered(L * L);
#pragma omp parallel
  {
    std::vector<cplx> sig(L), nat(L), col(L);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(L); ++i) {
      if (wide[i] == 0.0) continue;
      for (std::size_t ixi = 0; ixi < L; ++ixi)
        sig[ixi] = spec.values[ixi * L + i] * psi[ixi];
      detail::shift_to_natural(g, sig.data(), nat.data());
      detail::dft_backward(g, nat.data(), col.data());
      for (std::size_t m = 0; m < L; ++m) filtered[m * L + i] = col[m] * wide[i];
    }
  }

  HomBesovEvaluator eval(g, h);
  double besov = 0.0, sobolev = 0.0;
#pragma omp parallel for schedule(static) reduction(max : besov, sobolev)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
    const cplx* row = filtered.data() + std::size_t(m) * L;
    const HomBesovResult hb = eval.norm({row, L}, t, true);
    besov = std::max(besov, hb.value);
    sobolev = std::max(sobolev, slice_sobolev(g, row, h));
  }

  SliceNormResult r;
  r.k = k;
  r.t = t;
  r.besov = besov;
  r.sobolev = sobolev;
  r.scale = std::pow(2.0, k * a.order);
  r.besov_ratio = besov / r.scale;
  r.sobolev_ratio = sobolev / r.scale;
  return r;
}

namespace {
constexpr char kMagic[8] = {'P', 'D', 'O', 'S', 'Y', 'M', '1', '\0'};
}

void save_symbol(const std::string& path, const Symbol& a) {
  check_is_symbol(a, "save_symbol");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_symbol: cannot open " + path);
  os.write(kMagic, 8);
  const std::int32_t dim = a.grid.dim(), depth = a.grid.depth();
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&depth), 4);
  const double meta[3] = {a.order, a.rho, a.delta};
  os.write(reinterpret_cast<const char*>(meta), sizeof meta);
  const std::uint8_t has_tw = a.twisted_constant.has_value() ? 1 : 0;
  const double tw = a.twisted_constant.value_or(0.0);
  os.write(reinterpret_cast<const char*>(&has_tw), 1);
  os.write(reinterpret_cast<const char*>(&tw), 8);
  os.write(reinterpret_cast<const char*>(a.samples.data()),
           std::streamsize(a.samples.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("save_symbol: write failed for " + path);
}

Symbol load_symbol(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_symbol: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_symbol: " + path + " is not a symbol file");
  std::int32_t dim = 0, depth = 0;
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&depth), 4);
  if (!is) throw std::runtime_error("load_symbol: truncated header in " + path);
  TorusGrid g = make_grid(dim, depth);  // validates the ranges
  double meta[3];
  is.read(reinterpret_cast<char*>(meta), sizeof meta);
  std::uint8_t has_tw = 0;
  double tw = 0.0;
  is.read(reinterpret_cast<char*>(&has_tw), 1);
  is.read(reinterpret_cast<char*>(&tw), 8);
  Symbol a = zero_symbol(g, meta[0], meta[1], meta[2]);
  if (has_tw) a.twisted_constant = tw;
  is.read(reinterpret_cast<char*>(a.samples.data()),
          std::streamsize(a.samples.size() * sizeof(cplx)));
  if (!is || is.gcount() != std::streamsize(a.samples.size() * sizeof(cplx)))
    throw std::runtime_error("load_symbol: truncated payload in " + path);
  is.peek();
  if (!is.eof())
    throw std::runtime_error("load_symbol: trailing bytes in " + path);
  return a;
}

}  // namespace pdolab
