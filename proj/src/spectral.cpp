#include "qbe/gridops.hpp"

#include <fftw3.h>

#include <cassert>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "qbe/parallel.hpp"

namespace qbe {

namespace {

// decode a flattened half-complex index: i (kx) fastest, then j (ky), k (kz)
struct SpecIdx {
  int i, j, k;
};
inline SpecIdx decode(const PeriodicGrid& g, std::size_t s) {
  const int sx = g.n / 2 + 1;
  const int i = int(s % sx);
  const int j = int((s / sx) % g.n);
  const int k = int(s / (std::size_t(sx) * g.n));
  return {i, j, k};
}

// iterate over the (j, k) planes of the half spectrum; kx runs contiguously
// inside a plane, so hot loops avoid per-mode index arithmetic entirely
template <class F>
inline void for_each_plane(const PeriodicGrid& g, const F& body) {
  const int sx = g.n / 2 + 1;
  parallel_for(std::ptrdiff_t(g.n) * g.n, [&](std::ptrdiff_t p) {
    body(std::size_t(p) * std::size_t(sx), int(p % g.n), int(p / g.n));
  });
}

}  // namespace

SpectralWorkspace::SpectralWorkspace(const PeriodicGrid& g) : grid_(g) {
  assert(g.valid());
  const int n = g.n;
  xix_.resize(n / 2 + 1);
  xiy_.resize(n);
  const double base = 2.0 * M_PI / g.L;
  for (int i = 0; i <= n / 2; ++i) xix_[i] = (i == n / 2) ? 0.0 : base * i;
  for (int j = 0; j < n; ++j) {
    const int kj = j <= n / 2 ? j : j - n;
    xiy_[j] = (kj == n / 2 || kj == -n / 2) ? 0.0 : base * kj;
  }

  pw_flat_.resize(g.n_spec());
  xi2_flat_.resize(g.n_spec());
  std::size_t s = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= n / 2; ++i, ++s) {
        pw_flat_[s] = pweight(i);
        const double xx = xix_[i], xy = xiy_[j], xz = xiy_[k];
        xi2_flat_[s] = xx * xx + xy * xy + xz * xz;
      }

  scratch_.resize(g.n_spec());
  std::vector<double> scratch_re(g.n_real());
  // FFTW_UNALIGNED: plans stay valid for any array passed to the new-array
  // execute interface; FFTW_ESTIMATE: deterministic plan choice.
  plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, scratch_re.data(),
                                   reinterpret_cast<fftw_complex*>(scratch_.data()),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_c2r_3d(n, n, n,
                                   reinterpret_cast<fftw_complex*>(scratch_.data()),
                                   scratch_re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralWorkspace::~SpectralWorkspace() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralWorkspace::forward(std::span<const double> re, std::span<cplx> sp) const {
  assert(re.size() == grid_.n_real() && sp.size() == grid_.n_spec());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_),
                       const_cast<double*>(re.data()),
                       reinterpret_cast<fftw_complex*>(sp.data()));
  const double scale = 1.0 / double(grid_.n_real());
  parallel_for(std::ptrdiff_t(sp.size()), [&](std::ptrdiff_t s) { sp[s] *= scale; });
}

void SpectralWorkspace::backward(std::span<const cplx> sp, std::span<double> re) const {
  assert(re.size() == grid_.n_real() && sp.size() == grid_.n_spec());
  // the multi-dimensional c2r transform clobbers its input: feed it a copy
  std::memcpy(scratch_.data(), sp.data(), sp.size() * sizeof(cplx));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(scratch_.data()), re.data());
}

const SpectralWorkspace& workspace_for(const PeriodicGrid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<SpectralWorkspace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.n, g.L}];
  if (!slot) slot = std::make_unique<SpectralWorkspace>(g);
  return *slot;
}

void deriv_spec(const PeriodicGrid& g, std::span<const cplx> in, int axis,
                std::span<cplx> out) {
  const auto& ws = workspace_for(g);
  const int sx = g.n / 2 + 1;
  if (axis == 0) {
    for_each_plane(g, [&](std::size_t base, int, int) {
      for (int i = 0; i < sx; ++i) {
        const double xi = ws.xix(i);
        const cplx v = in[base + i];
        out[base + i] = cplx(-xi * v.imag(), xi * v.real());
      }
    });
  } else {
    for_each_plane(g, [&](std::size_t base, int j, int k) {
      const double xi = axis == 1 ? ws.xiy(j) : ws.xiz(k);
      for (int i = 0; i < sx; ++i) {
        const cplx v = in[base + i];
        out[base + i] = cplx(-xi * v.imag(), xi * v.real());
      }
    });
  }
}

void laplacian_spec(const PeriodicGrid& g, std::span<const cplx> in, std::span<cplx> out) {
  const auto& ws = workspace_for(g);
  const int sx = g.n / 2 + 1;
  for_each_plane(g, [&](std::size_t base, int j, int k) {
    const double xy = ws.xiy(j), xz = ws.xiz(k);
    const double y2 = xy * xy, z2 = xz * xz;
    for (int i = 0; i < sx; ++i) {
      const double xx = ws.xix(i);
      out[base + i] = -(xx * xx + y2 + z2) * in[base + i];
    }
  });
}

void dealias_spec(const PeriodicGrid& g, std::span<cplx> inout) {
  const auto& ws = workspace_for(g);
  const int n = g.n, sx = n / 2 + 1;
  // strict two-thirds rule: drop any |k| > n/3, keep |k| = n/3 exactly
  const int ix0 = n / 3 + 1;  // first kx with 3 kx > n
  for_each_plane(g, [&](std::size_t base, int j, int k) {
    const bool whole = 3 * std::abs(ws.ky_int(j)) > n || 3 * std::abs(ws.kz_int(k)) > n;
    for (int i = whole ? 0 : ix0; i < sx; ++i) inout[base + i] = cplx{};
  });
}

double spec_norm2(const PeriodicGrid& g, std::span<const cplx> c) {
  const auto pw = workspace_for(g).pweight_flat();
  return pairwise_sum(g.n_spec(), [&](std::size_t s) { return pw[s] * std::norm(c[s]); });
}

double spec_grad_norm2(const PeriodicGrid& g, std::span<const cplx> c) {
  const auto& ws = workspace_for(g);
  const auto pw = ws.pweight_flat();
  const auto xi2 = ws.xi2_flat();
  return pairwise_sum(g.n_spec(), [&](std::size_t s) {
    return pw[s] * xi2[s] * std::norm(c[s]);
  });
}

VecField gradient(ScalarField& f) {
  VecField r(f.grid());
  f.sync_spec();
  for (int axis = 0; axis < 3; ++axis)
    deriv_spec(f.grid(), f.spec(0), axis, r.spec_overwrite(axis));
  return r;
}

ScalarField divergence(VecField& v) {
  ScalarField r(v.grid());
  v.sync_spec();
  auto out = r.spec_overwrite(0);
  std::vector<cplx> tmp(v.grid().n_spec());
  deriv_spec(v.grid(), v.spec(0), 0, out);
  for (int axis = 1; axis < 3; ++axis) {
    deriv_spec(v.grid(), v.spec(axis), axis, tmp);
    for (std::size_t s = 0; s < tmp.size(); ++s) out[s] += tmp[s];
  }
  return r;
}

void helmholtz_project(VecField& v) {
  const PeriodicGrid g = v.grid();
  const auto& ws = workspace_for(g);
  const int sx = g.n / 2 + 1;
  v.sync_spec();
  auto vx = v.spec_rw(0), vy = v.spec_rw(1), vz = v.spec_rw(2);
  for_each_plane(g, [&](std::size_t base, int j, int k) {
    const double xy = ws.xiy(j), xz = ws.xiz(k);
    const double y2 = xy * xy, z2 = xz * xz;
    for (int i = 0; i < sx; ++i) {
      const double xx = ws.xix(i);
      const double x2 = xx * xx + y2 + z2;
      if (x2 == 0.0) continue;  // mean mode (and derivative-null planes) pass through
      const std::size_t s = base + i;
      const cplx dot = (xx * vx[s] + xy * vy[s] + xz * vz[s]) / x2;
      vx[s] -= xx * dot;
      vy[s] -= xy * dot;
      vz[s] -= xz * dot;
    }
  });
  v.solenoidal = true;
}

double max_spectral_divergence(VecField& v) {
  const PeriodicGrid g = v.grid();
  const auto& ws = workspace_for(g);
  v.sync_spec();
  auto vx = v.spec(0), vy = v.spec(1), vz = v.spec(2);
  const double m2 = pairwise_max(g.n_spec(), [&](std::size_t s) {
    const auto [i, j, k] = decode(g, s);
    return std::norm(ws.xix(i) * vx[s] + ws.xiy(j) * vy[s] + ws.xiz(k) * vz[s]);
  });
  return std::sqrt(m2);
}

std::pair<double, double> spectral_energy_split(VecField& v, double R) {
  const PeriodicGrid g = v.grid();
  const auto& ws = workspace_for(g);
  v.sync_spec();
  auto vx = v.spec(0), vy = v.spec(1), vz = v.spec(2);
  const double base = 2.0 * M_PI / g.L;
  const double vol = g.L * g.L * g.L;
  const auto shell_term = [&](std::size_t s, bool low) {
    const auto [i, j, k] = decode(g, s);
    const double xx = base * ws.kx_int(i), xy = base * ws.ky_int(j), xz = base * ws.kz_int(k);
    const bool in_low = std::sqrt(xx * xx + xy * xy + xz * xz) < R;
    if (in_low != low) return 0.0;
    return ws.pweight(i) * (std::norm(vx[s]) + std::norm(vy[s]) + std::norm(vz[s]));
  };
  const double lo = vol * pairwise_sum(g.n_spec(), [&](std::size_t s) { return shell_term(s, true); });
  const double hi = vol * pairwise_sum(g.n_spec(), [&](std::size_t s) { return shell_term(s, false); });
  return {lo, hi};
}

double integral_real(const PeriodicGrid& g, std::span<const double> f) {
  assert(f.size() == g.n_real());
  const double w = g.L * g.L * g.L / double(g.n_real());
  return w * pairwise_sum(g.n_real(), [&](std::size_t i) { return f[i]; });
}

}  // namespace qbe
