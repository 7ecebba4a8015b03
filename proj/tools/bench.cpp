// Benchmarks the OpenMP production kernels against the serial reference
// implementations and cross-checks their outputs.  Columns:
//   kernel,dim,depth,serial_ms,parallel_ms,speedup,max_rel_diff

#include <chrono>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "pdolab/maximal.hpp"
#include "pdolab/op.hpp"
#include "pdolab/reference.hpp"

using namespace pdolab;

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double best_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double scale = 1e-300, diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(a[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return diff / scale;
}

GridFunction random_field(const TorusGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction u{g, std::vector<cplx>(g.lattice_size())};
  for (auto& v : u.values) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v = cplx(re, im);
  }
  return u;
}

void row(const char* kernel, const TorusGrid& g, double serial_ms,
         double parallel_ms, double diff) {
  std::printf("%s,%d,%d,%.3f,%.3f,%.2f,%.3g\n", kernel, g.dim(), g.depth(),
              serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdolab kernel benchmark: OpenMP production vs serial reference"};
  int dim = 1, depth = 7, repeats = 3;
  std::uint64_t seed = 1;
  app.add_option("--dim", dim, "torus dimension (default 1)");
  app.add_option("--depth", depth, "grid depth (default 7)");
  app.add_option("--repeats", repeats, "timing repeats, best kept (default 3)");
  app.add_option("--seed", seed, "input seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const TorusGrid g = make_grid(dim, depth);
    const GridFunction u = random_field(g, seed);
    std::printf("kernel,dim,depth,serial_ms,parallel_ms,speedup,max_rel_diff\n");

    {
      SpectralFunction fast, slow;
      const double pms = best_ms(repeats, [&] { fast = forward_fourier(u); });
      const double sms =
          best_ms(repeats, [&] { slow = ref::forward_fourier(u); });
      row("fourier", g, sms, pms, rel_diff(slow.coeffs, fast.coeffs));
    }
    {
      std::vector<cplx> m(g.lattice_size());
      for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = 1.0 / (1.0 + g.freq(i).norm());
      std::mt19937_64 rng(seed + 1);
      std::normal_distribution<double> gauss(0.0, 1.0);
      Symbol a = multiplier_symbol(g, m);
      for (auto& v : a.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v *= cplx(1.0 + 0.1 * re, 0.1 * im);
      }
      GridFunction fast, slow;
      const double pms = best_ms(repeats, [&] { fast = apply_direct(a, u); });
      const double sms =
          best_ms(repeats, [&] { slow = ref::apply_direct(a, u); });
      row("apply", g, sms, pms, rel_diff(slow.values, fast.values));
    }
    {
      const MaximalParams mp = dyadic_params(g, 0.5);
      GridFunction fast, slow;
      const double pms =
          best_ms(repeats, [&] { fast = maximal_function(u, mp); });
      const double sms = best_ms(
          repeats, [&] { slow = ref::maximal_function(u, mp.t, mp.radii); });
      row("maximal", g, sms, pms, rel_diff(slow.values, fast.values));
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
