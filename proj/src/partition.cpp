#include "pdolab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pdolab/ramp.hpp"

namespace pdolab {

LPPartition build_partition(const TorusGrid& g) {
  if (g.dim() == 0) throw std::invalid_argument("build_partition: empty grid");
  LPPartition P;
  P.grid = g;
  P.jmax = g.depth() - 1;
  const std::size_t L = g.lattice_size();
  P.blocks.assign(P.jmax + 1, std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < L; ++i) {
    const double r = g.freq(i).norm();
    P.blocks[0][i] = radial_ramp(r);
    for (int j = 1; j < P.jmax; ++j)
      P.blocks[j][i] =
          radial_ramp(std::ldexp(r, -j)) - radial_ramp(std::ldexp(r, -(j - 1)));
    P.blocks[P.jmax][i] = 1.0 - radial_ramp(std::ldexp(r, -(P.jmax - 1)));
  }
  P.supports.resize(P.jmax + 1);
  for (int j = 0; j <= P.jmax; ++j)
    for (std::size_t i = 0; i < L; ++i)
      if (P.blocks[j][i] > 0.0) P.supports[j].push_back(i);
  return P;
}

std::vector<double> LPPartition::broadened(int k) const {
  if (k < 0 || k > jmax)
    throw std::invalid_argument("LPPartition::broadened: block index out of range");
  std::vector<double> w(grid.lattice_size(), 0.0);
  for (int j = std::max(0, k - 1); j <= std::min(jmax, k + 1); ++j)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += blocks[j][i];
  return w;
}

std::vector<double> LPPartition::low_pass(int k) const {
  std::vector<double> w(grid.lattice_size(), 0.0);
  for (int j = 0; j <= std::min(jmax, k); ++j)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += blocks[j][i];
  return w;
}

GridFunction lp_block(const GridFunction& u, const LPPartition& P, int j) {
  detail::check_same_grid(u.grid, P.grid, "lp_block");
  if (j < 0 || j > P.jmax) {
    std::ostringstream os;
    os << "lp_block: block index " << j << " outside [0," << P.jmax << "]";
    throw std::invalid_argument(os.str());
  }
  return apply_lattice_multiplier(P.blocks[j], u);
}

namespace {

void check_pq(double p, double q, const char* who) {
  if (!(p > 0.0)) throw std::invalid_argument(std::string(who) + ": p must be positive");
  if (!(q > 0.0)) throw std::invalid_argument(std::string(who) + ": q must be positive");
}

}  // namespace

double besov_norm(const GridFunction& u, const LPPartition& P, double s,
                  double p, double q) {
  detail::check_same_grid(u.grid, P.grid, "besov_norm");
  check_pq(p, q, "besov_norm");
  std::vector<double> terms;
  terms.reserve(P.jmax + 1);
  for (int j = 0; j <= P.jmax; ++j)
    terms.push_back(std::pow(2.0, j * s) * lp_norm(lp_block(u, P, j), p));
  if (std::isinf(q)) return *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, q);
  return std::pow(acc, 1.0 / q);
}

double triebel_lizorkin_norm(const GridFunction& u, const LPPartition& P,
                             double s, double p, double q) {
  detail::check_same_grid(u.grid, P.grid, "triebel_lizorkin_norm");
  check_pq(p, q, "triebel_lizorkin_norm");
  if (std::isinf(p))
    throw std::invalid_argument(
        "triebel_lizorkin_norm: p must be finite (use besov_norm for p = infinity)");
  const std::size_t L = u.grid.lattice_size();
  std::vector<GridFunction> blocks;
  blocks.reserve(P.jmax + 1);
  for (int j = 0; j <= P.jmax; ++j) blocks.push_back(lp_block(u, P, j));
  std::vector<double> weight(P.jmax + 1);
  for (int j = 0; j <= P.jmax; ++j) weight[j] = std::pow(2.0, j * s);

  GridFunction inner = zero_function(u.grid);
  const bool qinf = std::isinf(q);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < std::ptrdiff_t(L); ++m) {
    double acc = 0.0;
    for (int j = 0; j <= P.jmax; ++j) {
      const double a = weight[j] * std::abs(blocks[j].values[m]);
      if (qinf)
        acc = std::max(acc, a);
      else
        acc += std::pow(a, q);
    }
    inner.values[m] = qinf ? acc : std::pow(acc, 1.0 / q);
  }
  return lp_norm(inner, p);
}

double space_norm(const GridFunction& u, const LPPartition& P,
                  const SpaceParams& sp) {
  return sp.scale == SpaceScale::Besov
             ? besov_norm(u, P, sp.s, sp.p, sp.q)
             : triebel_lizorkin_norm(u, P, sp.s, sp.p, sp.q);
}

HomBesovEvaluator::HomBesovEvaluator(const TorusGrid& lattice, double h)
    : grid_(lattice), h_(h) {
  if (!(h > 0.0))
    throw std::invalid_argument("HomBesovEvaluator: mesh h must be positive");
  const std::size_t L = grid_.lattice_size();
  radius_.resize(L);
  for (std::size_t i = 0; i < L; ++i) radius_[i] = grid_.freq(i).norm() * h_;
  const int lo = kBlockLo - kTailBlocks;
  weight_.assign(kBlockHi - lo + 1, std::vector<double>(L, 0.0));
  for (int j = lo; j <= kBlockHi; ++j)
    for (std::size_t i = 0; i < L; ++i) {
      const double r = std::ldexp(radius_[i], -j);
      weight_[j - lo][i] = radial_ramp(r) - radial_ramp(2.0 * r);
    }
  all_.resize(L);
  std::iota(all_.begin(), all_.end(), std::size_t(0));
}

HomBesovResult HomBesovEvaluator::norm(std::span<const cplx> values, double t,
                                       bool require_annulus) const {
  return norm(values, t, require_annulus, all_);
}

HomBesovResult HomBesovEvaluator::norm(std::span<const cplx> values, double t,
                                       bool require_annulus,
                                       std::span<const std::size_t> support) const {
  if (!(t > 0.0) || std::isinf(t))
    throw std::invalid_argument("homogeneous_besov_norm: t must be finite and positive");
  const std::size_t L = grid_.lattice_size();
  if (values.size() != L)
    throw std::invalid_argument("homogeneous_besov_norm: slice size does not match lattice");

  std::vector<double> mag(support.size());
  double mx = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    mag[s] = std::abs(values[support[s]]);
    mx = std::max(mx, mag[s]);
  }
  const double cut = kSupportThreshold * mx;
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (mag[s] <= cut) continue;
    const double r = radius_[support[s]];
    if (r > 8.0 + 1e-9) {
      std::ostringstream os;
      os << "homogeneous_besov_norm: slice carries mass at |xi| = " << r
         << " > 8";
      throw std::invalid_argument(os.str());
    }
    if (require_annulus && r < 0.125 - 1e-9 && r > 0.0) {
      std::ostringstream os;
      os << "homogeneous_besov_norm: slice carries mass at |xi| = " << r
         << " < 1/8 (pass require_annulus = false for ball-supported slices)";
      throw std::invalid_argument(os.str());
    }
    if (require_annulus && r == 0.0) {
      throw std::invalid_argument(
          "homogeneous_besov_norm: slice carries mass at xi = 0 "
          "(pass require_annulus = false for ball-supported slices)");
    }
  }

  const int n = grid_.dim();
  const double cell = std::pow(h_, n);
  const int lo = kBlockLo - kTailBlocks;
  double main_sum = 0.0, tail_sum = 0.0;
  for (int j = lo; j <= kBlockHi; ++j) {
    const std::vector<double>& w = weight_[j - lo];
    double l1 = 0.0;
    for (std::size_t s = 0; s < support.size(); ++s) l1 += w[support[s]] * mag[s];
    l1 *= cell;
    if (l1 == 0.0) continue;
    // (2^{jn/t} l1)^t = 2^{jn} l1^t
    const double term = std::ldexp(std::pow(l1, t), j * n);
    if (j >= kBlockLo)
      main_sum += term;
    else
      tail_sum += term;
  }

  HomBesovResult r;
  r.h = h_;
  r.block_lo = kBlockLo;
  r.block_hi = kBlockHi;
  r.annulus_enforced = require_annulus;
  r.value = std::pow(main_sum, 1.0 / t);
  if (tail_sum > 0.0) {
    const double full = std::pow(main_sum + tail_sum, 1.0 / t);
    r.tail_fraction = full > 0.0 ? 1.0 - r.value / full : 0.0;
  }
  return r;
}

HomBesovResult homogeneous_besov_norm(const FrequencySlice& slice, double t,
                                      bool require_annulus) {
  HomBesovEvaluator eval(slice.grid, slice.h);
  return eval.norm(slice.values, t, require_annulus);
}

void write_partition_dump(std::ostream& os, const LPPartition& P) {
  os << "# dyadic partition dim=" << P.grid.dim() << " depth=" << P.grid.depth()
     << " jmax=" << P.jmax << "\n";
  os << "block,index,k1,k2,value\n";
  char buf[64];
  for (int j = 0; j <= P.jmax; ++j)
    for (std::size_t i : P.supports[j]) {
      const Freq f = P.grid.freq(i);
      std::snprintf(buf, sizeof buf, "%.17g", P.blocks[j][i]);
      os << j << ',' << i << ',' << f.k1 << ',' << f.k2 << ',' << buf << "\n";
    }
}

}  // namespace pdolab
