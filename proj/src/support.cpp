#include "pdolab/support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdolab/op.hpp"

namespace pdolab {

RegionSpec RegionSpec::annulus(double inner, double outer) {
  RegionSpec r;
  r.kind = Kind::Annulus;
  r.inner = inner;
  r.outer = outer;
  return r;
}

RegionSpec RegionSpec::ball(double outer) {
  RegionSpec r;
  r.kind = Kind::Ball;
  r.outer = outer;
  return r;
}

RegionSpec RegionSpec::point_set(const SupportSet& s) {
  RegionSpec r;
  r.kind = Kind::Points;
  r.points = s.points;
  return r;
}

bool RegionSpec::contains(const TorusGrid& g, std::size_t index) const {
  constexpr double slack = 1e-9;
  switch (kind) {
    case Kind::Annulus: {
      const double n = g.freq(index).norm();
      return n >= inner - slack && n <= outer + slack;
    }
    case Kind::Ball:
      return g.freq(index).norm() <= outer + slack;
    case Kind::Points:
      return std::binary_search(points.begin(), points.end(), index);
  }
  return false;
}

namespace {

double spectra_max(const std::vector<const SpectralFunction*>& spectra) {
  double mx = 0.0;
  for (const SpectralFunction* s : spectra)
    for (const cplx& c : s->coeffs) mx = std::max(mx, std::abs(c));
  return mx;
}

// Inclusion verdict for spectra against a claimed region.  The support
// threshold is rel_threshold * scale, where the caller's scale spans every
// sibling quantity of the check: a term that is zero up to roundoff next to
// an O(1) sibling has empty support, rather than the full-lattice "support"
// of its own noise.
SupportReport make_report(const RegionSpec& claimed,
                          const std::vector<const SpectralFunction*>& spectra,
                          double rel_threshold, double scale) {
  SupportReport rep;
  rep.claimed = claimed;
  const TorusGrid& g = spectra.front()->grid;

  const double cut = rel_threshold * scale;

  std::vector<std::size_t> merged;
  for (const SpectralFunction* s : spectra)
    for (std::size_t i = 0; i < s->coeffs.size(); ++i)
      if (std::abs(s->coeffs[i]) > cut) merged.push_back(i);
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  rep.observed = SupportSet{g, std::move(merged), rel_threshold};

  for (std::size_t idx : rep.observed.points) {
    if (claimed.contains(g, idx)) continue;
    double mag = 0.0;
    for (const SpectralFunction* s : spectra)
      mag = std::max(mag, std::abs(s->coeffs[idx]));
    if (!rep.pass && mag <= rep.worst_magnitude) continue;
    rep.pass = false;
    rep.worst_index = idx;
    rep.worst_magnitude = mag;
  }
  return rep;
}

}  // namespace

nlohmann::ordered_json to_json(const SupportReport& r) {
  nlohmann::ordered_json j;
  const TorusGrid& g = r.observed.grid;
  switch (r.claimed.kind) {
    case RegionSpec::Kind::Annulus:
      j["claimed"] = {{"kind", "annulus"},
                      {"inner", r.claimed.inner},
                      {"outer", r.claimed.outer}};
      break;
    case RegionSpec::Kind::Ball:
      j["claimed"] = {{"kind", "ball"}, {"outer", r.claimed.outer}};
      break;
    case RegionSpec::Kind::Points: {
      nlohmann::ordered_json pts = nlohmann::ordered_json::array();
      for (std::size_t idx : r.claimed.points) {
        const Freq f = g.freq(idx);
        pts.push_back({f.k1, f.k2});
      }
      j["claimed"] = {{"kind", "points"}, {"points", std::move(pts)}};
      break;
    }
  }
  nlohmann::ordered_json obs = nlohmann::ordered_json::array();
  for (std::size_t idx : r.observed.points) {
    const Freq f = g.freq(idx);
    obs.push_back({f.k1, f.k2});
  }
  j["observed"] = std::move(obs);
  j["threshold"] = r.observed.threshold;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.pass) {
    const Freq f = g.freq(r.worst_index);
    j["worst"] = {{"point", {f.k1, f.k2}}, {"magnitude", r.worst_magnitude}};
  }
  j["asymptotic"] = r.asymptotic;
  return j;
}

SupportReport support_rule_check(const Symbol& b, const GridFunction& v,
                                 double rel_threshold) {
  const TorusGrid& g = b.grid;
  detail::check_same_grid(g, v.grid, "support_rule_check");
  const std::size_t L = g.lattice_size();

  SpectralFunction vh = forward_fourier(v);
  SupportSet vsup = spectral_support(vh, rel_threshold);
  std::vector<char> in_v(L, 0);
  for (std::size_t i : vsup.points) in_v[i] = 1;

  SymbolSpectrum bs = symbol_spectrum(b);
  double bmax = 0.0;
  for (const cplx& c : bs.values) bmax = std::max(bmax, std::abs(c));
  const double cut = rel_threshold * bmax;

  // exact Minkowski arithmetic over the joint (xi, eta) support pairs
  std::vector<char> hit(L, 0);
  for (std::size_t ixi = 0; ixi < L; ++ixi) {
    const Freq fxi = g.freq(ixi);
    for (std::size_t ieta = 0; ieta < L; ++ieta) {
      if (!in_v[ieta]) continue;
      if (std::abs(bs.values[ixi * L + ieta]) <= cut) continue;
      const Freq feta = g.freq(ieta);
      const Freq sum{fxi.k1 + feta.k1, fxi.k2 + feta.k2};
      if (!g.in_lattice(sum)) {
        std::ostringstream os;
        os << "support_rule_check: pair (" << fxi.k1 << "," << fxi.k2
           << ") + (" << feta.k1 << "," << feta.k2
           << ") leaves the lattice; the discrete sum would alias";
        throw aliasing_error(os.str());
      }
      hit[g.index(sum)] = 1;
    }
  }
  std::vector<std::size_t> pts;
  for (std::size_t i = 0; i < L; ++i)
    if (hit[i]) pts.push_back(i);
  SupportSet claimed{g, std::move(pts), rel_threshold};

  SpectralFunction out = forward_fourier(apply_direct(b, v));
  return make_report(RegionSpec::point_set(claimed), {&out}, rel_threshold,
                     spectra_max({&out}));
}

LocalizationResult localization_check(const Symbol& a, const GridFunction& u,
                                      const LPPartition& P, int k) {
  const TorusGrid& g = a.grid;
  detail::check_same_grid(g, u.grid, "localization_check");
  detail::check_same_grid(g, P.grid, "localization_check");
  if (k < 2 || k > P.jmax - 1)
    throw std::invalid_argument(
        "localization_check: need 2 <= k <= jmax - 1");

  SplitResult s = apply_split(a, u, P);
  SpectralFunction lh = forward_fourier(s.low_high_terms[k]);
  SpectralFunction hl = forward_fourier(s.high_low_terms[k]);
  SpectralFunction di = forward_fourier(s.diagonal_terms[k]);
  const double R = std::ldexp(1.0, k);
  // one scale across all three terms, so a vanishing term stays vanishing
  const double scale = spectra_max({&lh, &hl, &di});

  LocalizationResult res;
  res.s1 = make_report(RegionSpec::annulus(R / 5.0, 5.0 * R), {&lh, &hl},
                       kSupportThreshold, scale);
  res.s2 = make_report(RegionSpec::ball(4.0 * R), {&di}, kSupportThreshold,
                       scale);

  if (a.twisted_constant) {
    const double C = *a.twisted_constant;
    int k0 = 0;
    while (std::ldexp(1.0, k0) <= 40.0 * C) ++k0;
    res.k_threshold = k0;
    SupportReport sp = make_report(RegionSpec::annulus(R / (4.0 * C), 4.0 * R),
                                   {&di}, kSupportThreshold, scale);
    sp.asymptotic = k < k0;
    res.s2_prime = std::move(sp);
  }
  return res;
}

}  // namespace pdolab
