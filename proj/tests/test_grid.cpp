#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "pdolab/grid.hpp"
#include "pdolab/reference.hpp"

using namespace pdolab;
using std::numbers::pi;

TEST_CASE("make_grid lattice layout") {
  TorusGrid g = make_grid(1, 3);
  CHECK(g.extent() == 8);
  CHECK(g.lattice_size() == 8);
  CHECK(g.freq(0).k1 == -4);
  CHECK(g.freq(7).k1 == 3);
  CHECK(g.spacing() == doctest::Approx(pi / 4.0));
  for (std::size_t i = 0; i < g.lattice_size(); ++i)
    CHECK(g.index(g.freq(i)) == i);

  TorusGrid g2 = make_grid(2, 4);
  CHECK(g2.lattice_size() == 256);
  for (std::size_t i = 0; i < g2.lattice_size(); ++i) {
    const Freq f = g2.freq(i);
    CHECK(f.k1 >= -8);
    CHECK(f.k1 < 8);
    CHECK(f.k2 >= -8);
    CHECK(f.k2 < 8);
    CHECK(g2.index(f) == i);
  }
}

TEST_CASE("make_grid rejects out-of-range parameters") {
  CHECK_THROWS_AS(make_grid(1, 15), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, 5), std::invalid_argument);
}

TEST_CASE("forward_fourier of elementary inputs") {
  TorusGrid g = make_grid(1, 5);
  const std::size_t L = g.lattice_size();

  GridFunction ones{g, std::vector<cplx>(L, 1.0)};
  SpectralFunction s = forward_fourier(ones);
  for (std::size_t i = 0; i < L; ++i) {
    const double expect = g.freq(i).k1 == 0 ? 1.0 : 0.0;
    CHECK(std::abs(s.coeffs[i] - expect) < 1e-13);
  }

  GridFunction mode{g, std::vector<cplx>(L)};
  for (std::size_t m = 0; m < L; ++m)
    mode.values[m] = std::polar(1.0, 3.0 * g.point(m)[0]);
  s = forward_fourier(mode);
  for (std::size_t i = 0; i < L; ++i) {
    const double expect = g.freq(i).k1 == 3 ? 1.0 : 0.0;
    CHECK(std::abs(s.coeffs[i] - expect) < 1e-13);
  }
}

TEST_CASE("pure modes in two dimensions") {
  TorusGrid g = make_grid(2, 4);
  for (const Freq target : {Freq{3, -5}, Freq{0, 7}, Freq{-8, -8}}) {
    GridFunction mode{g, std::vector<cplx>(g.lattice_size())};
    for (std::size_t m = 0; m < g.lattice_size(); ++m) {
      const auto x = g.point(m);
      mode.values[m] = std::polar(1.0, target.k1 * x[0] + target.k2 * x[1]);
    }
    SpectralFunction s = forward_fourier(mode);
    for (std::size_t i = 0; i < g.lattice_size(); ++i) {
      const double expect = g.freq(i) == target ? 1.0 : 0.0;
      CHECK(std::abs(s.coeffs[i] - expect) < 1e-13);
    }
  }
}

TEST_CASE("inverse_fourier inverts forward_fourier") {
  for (int dim : {1, 2}) {
    TorusGrid g = make_grid(dim, dim == 1 ? 6 : 4);
    GridFunction u = testutil::random_function(g, 11u + dim);
    GridFunction back = inverse_fourier(forward_fourier(u));
    CHECK(testutil::sup_diff(u.values, back.values) < 1e-12);
  }
}

TEST_CASE("transforms agree with the quadratic reference") {
  for (auto [dim, depth] : {std::pair{1, 3}, {1, 5}, {2, 3}, {2, 4}}) {
    TorusGrid g = make_grid(dim, depth);
    GridFunction u = testutil::random_function(g, 100u * dim + depth);
    SpectralFunction fast = forward_fourier(u);
    SpectralFunction slow = ref::forward_fourier(u);
    CHECK(testutil::sup_diff(fast.coeffs, slow.coeffs) < 1e-12);

    SpectralFunction s = testutil::random_spectrum(g, g.extent() / 2.0, 7u * depth);
    GridFunction ifast = inverse_fourier(s);
    GridFunction islow = ref::inverse_fourier(s);
    CHECK(testutil::sup_diff(ifast.values, islow.values) < 1e-11);
  }
}

TEST_CASE("forward_fourier is linear") {
  TorusGrid g = make_grid(1, 6);
  GridFunction u = testutil::random_function(g, 21);
  GridFunction v = testutil::random_function(g, 22);
  const cplx a(0.3, -1.1), b(-2.0, 0.7);
  GridFunction w{g, std::vector<cplx>(g.lattice_size())};
  for (std::size_t m = 0; m < w.values.size(); ++m)
    w.values[m] = a * u.values[m] + b * v.values[m];
  SpectralFunction sw = forward_fourier(w);
  SpectralFunction su = forward_fourier(u);
  SpectralFunction sv = forward_fourier(v);
  for (std::size_t i = 0; i < sw.coeffs.size(); ++i)
    CHECK(std::abs(sw.coeffs[i] - (a * su.coeffs[i] + b * sv.coeffs[i])) < 1e-12);
}

TEST_CASE("lp_norm closed forms") {
  TorusGrid g = make_grid(1, 6);
  const std::size_t L = g.lattice_size();

  GridFunction ones{g, std::vector<cplx>(L, 1.0)};
  CHECK(lp_norm(ones, 2.0) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
  CHECK(lp_norm(ones, 1.0) == doctest::Approx(2.0 * pi).epsilon(1e-12));
  CHECK(lp_norm(ones, std::numeric_limits<double>::infinity()) == 1.0);

  GridFunction sine{g, std::vector<cplx>(L)};
  for (std::size_t m = 0; m < L; ++m) sine.values[m] = std::sin(g.point(m)[0]);
  CHECK(lp_norm(sine, 2.0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK(lp_norm(sine, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  TorusGrid g2 = make_grid(2, 4);
  GridFunction ones2{g2, std::vector<cplx>(g2.lattice_size(), 1.0)};
  CHECK(lp_norm(ones2, 2.0) == doctest::Approx(2.0 * pi).epsilon(1e-12));

  // quasi-norm range and scaling
  GridFunction u = testutil::random_function(g, 31);
  const double half = lp_norm(u, 0.5);
  CHECK(half > 0.0);
  GridFunction su = u;
  for (auto& v : su.values) v *= cplx(0.0, -2.5);
  for (double p : {0.5, 1.0, 2.0, 7.0})
    CHECK(lp_norm(su, p) == doctest::Approx(2.5 * lp_norm(u, p)).epsilon(1e-12));

  CHECK_THROWS_AS(lp_norm(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lp_norm(u, -1.0), std::invalid_argument);
}

TEST_CASE("Parseval identity") {
  for (int dim : {1, 2}) {
    TorusGrid g = make_grid(dim, dim == 1 ? 7 : 5);
    GridFunction u = testutil::random_function(g, 40u + dim);
    SpectralFunction s = forward_fourier(u);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& c : s.coeffs) lhs += std::norm(c);
    for (const auto& v : u.values) rhs += std::norm(v);
    rhs /= double(g.lattice_size());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("spectral_support thresholding") {
  TorusGrid g = make_grid(1, 5);
  SpectralFunction s{g, std::vector<cplx>(g.lattice_size())};
  SupportSet empty = spectral_support(s);
  CHECK(empty.empty());

  s.coeffs[g.index(Freq{5, 0})] = 1.0;
  s.coeffs[g.index(Freq{-3, 0})] = 1e-5;
  s.coeffs[g.index(Freq{1, 0})] = 1e-12;
  SupportSet sup = spectral_support(s);
  CHECK(sup.size() == 2);
  CHECK(sup.contains_index(g.index(Freq{5, 0})));
  CHECK(sup.contains_index(g.index(Freq{-3, 0})));
  CHECK(!sup.contains_index(g.index(Freq{1, 0})));

  CHECK_THROWS_AS(spectral_support(s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(spectral_support(s, -0.1), std::invalid_argument);
}

TEST_CASE("minkowski_sum enumerates exactly and detects aliasing") {
  TorusGrid g = make_grid(1, 5);
  auto set_of = [&](std::initializer_list<int> ks) {
    SupportSet s{g, {}, 0.0};
    for (int k : ks) s.points.push_back(g.index(Freq{k, 0}));
    std::sort(s.points.begin(), s.points.end());
    return s;
  };
  SupportSet sum = set_of({-1, 2});
  SupportSet b = set_of({3});
  SupportSet r = minkowski_sum(sum, b);
  CHECK(r.size() == 2);
  CHECK(r.contains_index(g.index(Freq{2, 0})));
  CHECK(r.contains_index(g.index(Freq{5, 0})));

  // overlap collapses duplicates
  SupportSet r2 = minkowski_sum(set_of({0, 1}), set_of({0, 1}));
  CHECK(r2.size() == 3);

  CHECK_THROWS_AS(minkowski_sum(set_of({15}), set_of({1})), aliasing_error);
  CHECK_THROWS_AS(minkowski_sum(set_of({-16}), set_of({-1})), aliasing_error);

  TorusGrid g2 = make_grid(2, 3);
  SupportSet a2{g2, {g2.index(Freq{2, -1})}, 0.0};
  SupportSet b2{g2, {g2.index(Freq{1, 3})}, 0.0};
  SupportSet r3 = minkowski_sum(a2, b2);
  CHECK(r3.size() == 1);
  CHECK(r3.contains_index(g2.index(Freq{3, 2})));
}

TEST_CASE("lattice multipliers act locally") {
  TorusGrid g = make_grid(1, 6);
  GridFunction u = testutil::random_function(g, 55);

  std::vector<double> id(g.lattice_size(), 1.0);
  GridFunction same = apply_lattice_multiplier(id, u);
  CHECK(testutil::sup_diff(u.values, same.values) < 1e-12);

  std::vector<double> lowpass(g.lattice_size(), 0.0);
  for (std::size_t i = 0; i < lowpass.size(); ++i)
    if (g.freq(i).norm() <= 10.0) lowpass[i] = 1.0;
  GridFunction cut = apply_lattice_multiplier(lowpass, u);
  SupportSet sup = spectral_support(forward_fourier(cut));
  SupportSet usup = spectral_support(forward_fourier(u));
  for (std::size_t idx : sup.points) {
    CHECK(lowpass[idx] > 0.0);
    CHECK(usup.contains_index(idx));
  }
}
