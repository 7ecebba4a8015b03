#include "pdolab/detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace pdolab::detail {

namespace {

struct PlanEntry {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* scratch_in = nullptr;
  fftw_complex* scratch_out = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanEntry>& plan_cache() {
  static std::map<std::pair<int, int>, PlanEntry> cache;
  return cache;
}

// FFTW planning is not thread safe, so the cache is filled under a lock.
// FFTW_UNALIGNED lets the cached plans run on any caller-provided buffer.
const PlanEntry& plans_for(const TorusGrid& g) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(g.dim(), g.extent());
  auto it = plan_cache().find(key);
  if (it != plan_cache().end()) return it->second;

  PlanEntry e;
  const int N = g.extent();
  e.scratch_in = fftw_alloc_complex(g.lattice_size());
  e.scratch_out = fftw_alloc_complex(g.lattice_size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (g.dim() == 1) {
    e.fwd = fftw_plan_dft_1d(N, e.scratch_in, e.scratch_out, FFTW_FORWARD, flags);
    e.bwd = fftw_plan_dft_1d(N, e.scratch_in, e.scratch_out, FFTW_BACKWARD, flags);
  } else {
    e.fwd = fftw_plan_dft_2d(N, N, e.scratch_in, e.scratch_out, FFTW_FORWARD, flags);
    e.bwd = fftw_plan_dft_2d(N, N, e.scratch_in, e.scratch_out, FFTW_BACKWARD, flags);
  }
  return plan_cache().emplace(key, e).first->second;
}

fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

void dft_forward(const TorusGrid& g, const cplx* in, cplx* out) {
  fftw_execute_dft(plans_for(g).fwd, as_fftw(in), as_fftw(out));
}

void dft_backward(const TorusGrid& g, const cplx* in, cplx* out) {
  fftw_execute_dft(plans_for(g).bwd, as_fftw(in), as_fftw(out));
}

// natural index f <-> signed index s on one axis: f = (s + N/2) mod N, where
// s counts from frequency -N/2 upward.
void shift_to_signed(const TorusGrid& g, const cplx* natural, cplx* sig) {
  const int N = g.extent();
  const int h = N / 2;
  if (g.dim() == 1) {
    for (int s = 0; s < N; ++s) sig[s] = natural[(s + h) % N];
    return;
  }
  for (int s1 = 0; s1 < N; ++s1)
    for (int s2 = 0; s2 < N; ++s2)
      sig[std::size_t(s1) * N + s2] =
          natural[std::size_t((s1 + h) % N) * N + (s2 + h) % N];
}

void shift_to_natural(const TorusGrid& g, const cplx* sig, cplx* natural) {
  const int N = g.extent();
  const int h = N / 2;
  if (g.dim() == 1) {
    for (int s = 0; s < N; ++s) natural[(s + h) % N] = sig[s];
    return;
  }
  for (int s1 = 0; s1 < N; ++s1)
    for (int s2 = 0; s2 < N; ++s2)
      natural[std::size_t((s1 + h) % N) * N + (s2 + h) % N] =
          sig[std::size_t(s1) * N + s2];
}

}  // namespace pdolab::detail
