#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pdolab/partition.hpp"
#include "pdolab/ramp.hpp"

using namespace pdolab;
using std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

// Integer-exact annulus tests: |kappa| >= (a/b) 2^j  <=>  b^2 |kappa|^2 >= a^2 4^j.
static bool ge_frac(const Freq& f, int num, int den, int j) {
  const long long n2 = (long long)f.k1 * f.k1 + (long long)f.k2 * f.k2;
  return (long long)den * den * n2 >= (long long)num * num * (1LL << (2 * j));
}
static bool le_frac(const Freq& f, int num, int den, int j) {
  const long long n2 = (long long)f.k1 * f.k1 + (long long)f.k2 * f.k2;
  return (long long)den * den * n2 <= (long long)num * num * (1LL << (2 * j));
}

TEST_CASE("blocks form a partition of unity with exact annular supports") {
  for (auto [dim, depth] : {std::pair{1, 6}, {2, 5}}) {
    TorusGrid g = make_grid(dim, depth);
    LPPartition P = build_partition(g);
    CHECK(P.jmax == depth - 1);
    REQUIRE(int(P.blocks.size()) == P.jmax + 1);

    for (std::size_t i = 0; i < g.lattice_size(); ++i) {
      const Freq f = g.freq(i);
      double sum = 0.0;
      for (int j = 0; j <= P.jmax; ++j) {
        const double v = P.blocks[j][i];
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);

      // block 0: vanishes for |kappa| >= 13/10, equals 1 for |kappa| <= 11/10
      if (ge_frac(f, 13, 10, 0)) CHECK(P.blocks[0][i] == 0.0);
      if (le_frac(f, 11, 10, 0)) CHECK(P.blocks[0][i] == 1.0);
      for (int j = 1; j < P.jmax; ++j) {
        if (!ge_frac(f, 11, 20, j) || !le_frac(f, 13, 10, j))
          CHECK(P.blocks[j][i] == 0.0);
        if (ge_frac(f, 13, 20, j) && le_frac(f, 11, 10, j))
          CHECK(P.blocks[j][i] == 1.0);
      }
      // top block: vanishes on |kappa| <= 11/20 2^jmax
      if (le_frac(f, 11, 20, P.jmax)) CHECK(P.blocks[P.jmax][i] == 0.0);
    }

    for (int j = 0; j <= P.jmax; ++j) {
      CHECK(!P.supports[j].empty());
      for (std::size_t i : P.supports[j]) CHECK(P.blocks[j][i] > 0.0);
    }
  }
}

TEST_CASE("block decomposition reconstructs the input") {
  for (auto [dim, depth] : {std::pair{1, 7}, {2, 4}}) {
    TorusGrid g = make_grid(dim, depth);
    LPPartition P = build_partition(g);
    GridFunction u = testutil::random_function(g, 17u * depth);
    GridFunction sum = zero_function(g);
    for (int j = 0; j <= P.jmax; ++j) {
      GridFunction uj = lp_block(u, P, j);
      for (std::size_t m = 0; m < sum.values.size(); ++m)
        sum.values[m] += uj.values[m];
    }
    CHECK(testutil::sup_diff(sum.values, u.values) < 1e-12);
    CHECK_THROWS_AS(lp_block(u, P, -1), std::invalid_argument);
    CHECK_THROWS_AS(lp_block(u, P, P.jmax + 1), std::invalid_argument);
  }
}

TEST_CASE("broadened blocks dominate their core block") {
  TorusGrid g = make_grid(1, 8);
  LPPartition P = build_partition(g);
  const std::size_t L = g.lattice_size();

  // (broadened k) * (block k) == block k: the three-term sum is 1 wherever
  // block k lives.
  for (int k = 0; k <= P.jmax; ++k) {
    std::vector<double> w = P.broadened(k);
    for (std::size_t i = 0; i < L; ++i)
      CHECK(std::abs(w[i] * P.blocks[k][i] - P.blocks[k][i]) < 1e-14);
  }

  // sum_k broadened(k) = 3 - block 0 - block jmax
  std::vector<double> acc(L, 0.0);
  for (int k = 0; k <= P.jmax; ++k) {
    std::vector<double> w = P.broadened(k);
    for (std::size_t i = 0; i < L; ++i) acc[i] += w[i];
  }
  for (std::size_t i = 0; i < L; ++i)
    CHECK(std::abs(acc[i] - (3.0 - P.blocks[0][i] - P.blocks[P.jmax][i])) < 1e-13);

  // annulus containment (11/40) 2^k <= |kappa| <= (26/10) 2^k, hence also
  // [2^k/4, 4 2^k], for interior k >= 2 (for k <= 1 the broadened block
  // contains block 0 and so reaches the origin)
  for (int k = 2; k <= P.jmax - 2; ++k) {
    std::vector<double> w = P.broadened(k);
    for (std::size_t i = 0; i < L; ++i)
      if (w[i] > 0.0) {
        const Freq f = g.freq(i);
        CHECK(ge_frac(f, 11, 40, k));
        CHECK(le_frac(f, 26, 10, k));
        CHECK(ge_frac(f, 1, 4, k));
        CHECK(le_frac(f, 4, 1, k));
      }
  }
}

TEST_CASE("low-pass cuts") {
  TorusGrid g = make_grid(1, 7);
  LPPartition P = build_partition(g);
  const std::size_t L = g.lattice_size();
  std::vector<double> none = P.low_pass(-1);
  std::vector<double> all = P.low_pass(P.jmax);
  for (std::size_t i = 0; i < L; ++i) {
    CHECK(none[i] == 0.0);
    CHECK(std::abs(all[i] - 1.0) < 1e-13);
  }
  for (int k = 0; k < P.jmax; ++k) {
    std::vector<double> w = P.low_pass(k);
    for (std::size_t i = 0; i < L; ++i) {
      const Freq f = g.freq(i);
      if (le_frac(f, 11, 10, k)) CHECK(std::abs(w[i] - 1.0) < 1e-14);
      if (ge_frac(f, 13, 10, k)) CHECK(w[i] == 0.0);
    }
  }
}

TEST_CASE("inhomogeneous norms on a pure dyadic mode") {
  TorusGrid g = make_grid(1, 7);
  LPPartition P = build_partition(g);
  GridFunction u{g, std::vector<cplx>(g.lattice_size())};
  for (std::size_t m = 0; m < u.values.size(); ++m)
    u.values[m] = std::polar(1.0, 32.0 * g.point(m)[0]);  // block 5 exactly

  GridFunction u5 = lp_block(u, P, 5);
  CHECK(testutil::sup_diff(u5.values, u.values) < 1e-12);

  CHECK(besov_norm(u, P, 1.0, 2.0, 1.0) ==
        doctest::Approx(32.0 * std::sqrt(2.0 * pi)).epsilon(1e-10));
  CHECK(besov_norm(u, P, 0.0, kInf, kInf) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(besov_norm(u, P, -1.0, 1.0, 2.0) ==
        doctest::Approx(2.0 * pi / 32.0).epsilon(1e-10));

  // single-block inputs make every scale collapse to 2^{js} ||u||_p;
  // q < 1 amplifies the 1e-16 leakage in the empty blocks, hence the
  // looser tolerance there
  for (double q : {1.0, 2.0})
    CHECK(triebel_lizorkin_norm(u, P, 1.0, 2.0, q) ==
          doctest::Approx(32.0 * std::sqrt(2.0 * pi)).epsilon(1e-10));
  CHECK(triebel_lizorkin_norm(u, P, 1.0, 2.0, 0.5) ==
        doctest::Approx(32.0 * std::sqrt(2.0 * pi)).epsilon(1e-5));
}

TEST_CASE("norm families: orderings and identities") {
  TorusGrid g = make_grid(1, 7);
  LPPartition P = build_partition(g);
  GridFunction u = testutil::random_function(g, 99);

  const double b1 = besov_norm(u, P, 0.5, 2.0, 1.0);
  const double b2 = besov_norm(u, P, 0.5, 2.0, 2.0);
  const double binf = besov_norm(u, P, 0.5, 2.0, kInf);
  CHECK(binf <= b2 + 1e-12);
  CHECK(b2 <= b1 + 1e-12);

  // Fubini for p = q = 2: the square of the norm is the weighted sum of
  // block energies.
  double acc = 0.0;
  for (int j = 0; j <= P.jmax; ++j) {
    const double nj = lp_norm(lp_block(u, P, j), 2.0);
    acc += std::pow(2.0, 2.0 * 0.7 * j) * nj * nj;
  }
  CHECK(triebel_lizorkin_norm(u, P, 0.7, 2.0, 2.0) ==
        doctest::Approx(std::sqrt(acc)).epsilon(1e-10));

  CHECK_THROWS_AS(triebel_lizorkin_norm(u, P, 0.0, kInf, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(u, P, 0.0, -2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(u, P, 0.0, 2.0, 0.0), std::invalid_argument);

  SpaceParams bp{0.5, 2.0, 1.0, SpaceScale::Besov};
  CHECK(space_norm(u, P, bp) == doctest::Approx(b1));
  SpaceParams fp{0.7, 2.0, 2.0, SpaceScale::TriebelLizorkin};
  CHECK(space_norm(u, P, fp) ==
        doctest::Approx(triebel_lizorkin_norm(u, P, 0.7, 2.0, 2.0)));

  TorusGrid other = make_grid(1, 6);
  GridFunction v = testutil::random_function(other, 1);
  CHECK_THROWS_AS(besov_norm(v, P, 0.0, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("homogeneous surrogate: exact single-block slices") {
  TorusGrid g = make_grid(1, 6);
  const double h = 0.25;
  FrequencySlice s{g, h, std::vector<cplx>(g.lattice_size())};
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.lattice_size(); ++i) {
    const double r = g.freq(i).norm() * h;
    if (r >= 0.7 && r <= 1.0) {  // flat ring of homogeneous block 0
      s.values[i] = 1.0;
      ++count;
    }
  }
  REQUIRE(count > 0);
  for (double t : {0.5, 2.0 / 3.0, 1.0}) {
    HomBesovResult r = homogeneous_besov_norm(s, t);
    CHECK(r.value == doctest::Approx(h * double(count)).epsilon(1e-12));
    CHECK(r.tail_fraction == 0.0);
  }

  // dilation g(2 xi): same samples, halved mesh; norm scales by 2^{-(1+1/t)}
  FrequencySlice s2{g, h / 2.0, s.values};
  for (double t : {0.5, 1.0}) {
    const double r1 = homogeneous_besov_norm(s, t).value;
    const double r2 = homogeneous_besov_norm(s2, t).value;
    CHECK(r2 / r1 == doctest::Approx(std::pow(2.0, -(1.0 + 1.0 / t))).epsilon(1e-10));
  }
}

TEST_CASE("homogeneous surrogate: mesh refinement stability") {
  auto sample = [](int depth, double h) {
    TorusGrid g = make_grid(1, depth);
    FrequencySlice s{g, h, std::vector<cplx>(g.lattice_size())};
    for (std::size_t i = 0; i < g.lattice_size(); ++i) {
      const double r = g.freq(i).norm() * h;
      s.values[i] = radial_ramp(r / 2.0) * (1.0 - radial_ramp(r));
    }
    return s;
  };
  const double coarse = homogeneous_besov_norm(sample(7, 0.125), 0.5).value;
  const double fine = homogeneous_besov_norm(sample(8, 0.0625), 0.5).value;
  CHECK(std::abs(fine - coarse) / fine < 0.05);
}

TEST_CASE("homogeneous surrogate: support enforcement and ball mode") {
  TorusGrid g = make_grid(1, 6);
  FrequencySlice inner{g, 0.125, std::vector<cplx>(g.lattice_size())};
  inner.values[g.index(Freq{7, 0})] = 1.0;   // |xi| = 0.875, fine
  inner.values[g.index(Freq{-1, 0})] = 0.5;  // |xi| = 0.125 - on the edge, fine
  CHECK_NOTHROW(homogeneous_besov_norm(inner, 0.5));
  inner.values[g.index(Freq{0, 0})] = 0.5;  // mass at the origin
  CHECK_THROWS_AS(homogeneous_besov_norm(inner, 0.5), std::invalid_argument);
  CHECK_NOTHROW(homogeneous_besov_norm(inner, 0.5, false));

  FrequencySlice outer{g, 0.3, std::vector<cplx>(g.lattice_size())};
  outer.values[g.index(Freq{31, 0})] = 1.0;  // |xi| = 9.3 > 8
  CHECK_THROWS_AS(homogeneous_besov_norm(outer, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(homogeneous_besov_norm(outer, 0.5, false), std::invalid_argument);

  // ball-supported slice: finite value, small measured truncation tail
  FrequencySlice ball{g, 0.125, std::vector<cplx>(g.lattice_size())};
  for (std::size_t i = 0; i < g.lattice_size(); ++i)
    ball.values[i] = radial_bump(g.freq(i).norm() * 0.125);
  HomBesovResult r = homogeneous_besov_norm(ball, 0.5, false);
  CHECK(r.value > 0.0);
  CHECK(r.tail_fraction < 0.01);

  CHECK_THROWS_AS(homogeneous_besov_norm(ball, 0.0, false), std::invalid_argument);
  CHECK_THROWS_AS(homogeneous_besov_norm(ball, kInf, false), std::invalid_argument);
}

TEST_CASE("partition dump is parseable") {
  TorusGrid g = make_grid(1, 4);
  LPPartition P = build_partition(g);
  std::ostringstream os;
  write_partition_dump(os, P);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("# dyadic partition", 0) == 0);
  std::getline(is, line);
  CHECK(line == "block,index,k1,k2,value");
  std::size_t rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  std::size_t expect = 0;
  for (const auto& sup : P.supports) expect += sup.size();
  CHECK(rows == expect);
}
