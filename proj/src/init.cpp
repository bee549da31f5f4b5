#include "qbe/init.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "qbe/gridops.hpp"
#include "qbe/parallel.hpp"
#include "qbe/rng.hpp"

namespace qbe {
namespace {

// Squared distance to `center` under the minimum-image convention, so the
// envelope is genuinely periodic (no seam at the box boundary).
double periodic_dist2(const PeriodicGrid& g, int i, int j, int k, const double center[3]) {
  const double x[3] = {i * g.dx(), j * g.dx(), k * g.dx()};
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    double d = std::fabs(x[a] - center[a]);
    d = std::min(d, g.L - d);
    d2 += d * d;
  }
  return d2;
}

void fill_taylor_green(VecField& u, double amp, double L) {
  const PeriodicGrid& g = u.grid();
  const double kk = 2.0 * M_PI / L;
  auto* u0 = u.real_overwrite(0).data();
  auto* u1 = u.real_overwrite(1).data();
  auto* u2 = u.real_overwrite(2).data();
  parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t idx) {
    const std::size_t s = std::size_t(idx);
    const int i = int(s % std::size_t(g.n));
    const int j = int((s / std::size_t(g.n)) % std::size_t(g.n));
    const int k = int(s / (std::size_t(g.n) * std::size_t(g.n)));
    const double x = i * g.dx(), y = j * g.dx(), z = k * g.dx();
    const double cz = std::cos(kk * z);
    u0[s] = amp * std::sin(kk * x) * std::cos(kk * y) * cz;
    u1[s] = -amp * std::cos(kk * x) * std::sin(kk * y) * cz;
    u2[s] = 0.0;
  });
}

void fill_solenoidal_blob(VecField& u, double amp, double width) {
  const PeriodicGrid& g = u.grid();
  // Off-center so the blob has no accidental symmetry with the grid axes.
  const double center[3] = {0.4 * g.L, 0.5 * g.L, 0.55 * g.L};
  const double dir[3] = {1.0, -0.6, 0.3};
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (int c = 0; c < 3; ++c) {
    auto* dst = u.real_overwrite(c).data();
    parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t idx) {
      const std::size_t s = std::size_t(idx);
      const int i = int(s % std::size_t(g.n));
      const int j = int((s / std::size_t(g.n)) % std::size_t(g.n));
      const int k = int(s / (std::size_t(g.n) * std::size_t(g.n)));
      dst[s] = amp * dir[c] * std::exp(-periodic_dist2(g, i, j, k, center) * inv2w2);
    });
  }
  u.sync_spec();
  // Remove the mean, then take the solenoidal part.  Order matters only
  // cosmetically (projection preserves the k=0 slot), but a mean-free
  // velocity is what the decay statements are about, so make it explicit.
  for (int c = 0; c < 3; ++c) u.spec_rw(c)[0] = 0.0;
  helmholtz_project(u);
  dealias(u);
  u.sync_real();
}

void fill_gaussian_blob_q(QField& q, double amp, double width) {
  const PeriodicGrid& g = q.grid();
  const double center[3] = {0.5 * g.L, 0.5 * g.L, 0.5 * g.L};
  const double inv2w2 = 1.0 / (2.0 * width * width);
  auto* dst = q.real_overwrite(0).data();
  parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t idx) {
    const std::size_t s = std::size_t(idx);
    const int i = int(s % std::size_t(g.n));
    const int j = int((s / std::size_t(g.n)) % std::size_t(g.n));
    const int k = int(s / (std::size_t(g.n) * std::size_t(g.n)));
    dst[s] = amp * std::exp(-periodic_dist2(g, i, j, k, center) * inv2w2);
  });
  for (int c = 1; c < 5; ++c) {
    auto sp = q.real_overwrite(c);
    std::fill(sp.begin(), sp.end(), 0.0);
  }
}

// Band-limited random field: draw independent complex Gaussians for the
// canonical half of the modes with |k_a| <= K and mirror conjugates onto
// the kx = 0 plane by hand.  The half-spectrum storage only deduplicates
// modes along kx, so slots with kx = 0 carry their own Hermitian
// constraint; writing both members keeps forward(backward(x)) == x.
void fill_random_smooth_q(QField& q, double width, std::uint64_t seed) {
  const PeriodicGrid& g = q.grid();
  const int kmax_band = std::clamp(int(std::lround(g.L / width)), 1, g.n / 3);
  const double inv_k2 = 1.0 / double(kmax_band * kmax_band);
  SplitMix64 rng(seed);
  const int n = g.n;
  const std::size_t nzc = std::size_t(n / 2 + 1);
  for (int c = 0; c < 5; ++c) {
    auto sp = q.spec_overwrite(c);
    std::fill(sp.begin(), sp.end(), std::complex<double>(0.0, 0.0));
    for (int kz = -kmax_band; kz <= kmax_band; ++kz)
      for (int ky = -kmax_band; ky <= kmax_band; ++ky)
        for (int kx = 0; kx <= kmax_band; ++kx) {
          if (kx == 0 && ky == 0 && kz == 0) continue;
          // On the kx = 0 plane keep one representative per conjugate
          // pair; the mirror slot is filled below.
          if (kx == 0 && !(kz > 0 || (kz == 0 && ky > 0))) continue;
          const double k2 = double(kx * kx + ky * ky + kz * kz);
          const double w = std::exp(-k2 * inv_k2);
          const std::complex<double> v(w * rng.next_gaussian(), w * rng.next_gaussian());
          const std::size_t jy = std::size_t(ky >= 0 ? ky : ky + n);
          const std::size_t jz = std::size_t(kz >= 0 ? kz : kz + n);
          sp[(jz * std::size_t(n) + jy) * nzc + std::size_t(kx)] = v;
          if (kx == 0) {
            const std::size_t my = std::size_t(ky <= 0 ? -ky : n - ky);
            const std::size_t mz = std::size_t(kz <= 0 ? -kz : n - kz);
            sp[(mz * std::size_t(n) + my) * nzc] = std::conj(v);
          }
        }
  }
  q.sync_real();
}

void rescale_sup(QField& q, double target) {
  double sup = linf_pointwise(q);
  if (sup <= 0.0) return;
  const double s = target / sup;
  for (int c = 0; c < 5; ++c) {
    auto sp = q.real_rw(c);
    parallel_for(std::ptrdiff_t(sp.size()), [&](std::ptrdiff_t i) { sp[i] *= s; });
  }
}

}  // namespace

State synthesize_initial_data(const RunConfig& cfg, const PotentialHypothesesReport& pr) {
  const PeriodicGrid g{cfg.grid.n, cfg.grid.L};
  State st(g);
  st.t = 0.0;

  const InitConfig& ic = cfg.init;
  if (ic.q_kind != "zero" && ic.amplitude_q > pr.r2) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "init.amplitude_q: %g exceeds the potential's confinement radius r2 = %.17g",
                  ic.amplitude_q, pr.r2);
    throw ConfigError({std::string(buf)});
  }

  if (ic.u_kind == "taylor_green") {
    fill_taylor_green(st.u, ic.amplitude_u, g.L);
    st.u.sync_spec();
    helmholtz_project(st.u);
    dealias(st.u);
    st.u.sync_real();
  } else if (ic.u_kind == "solenoidal_blob") {
    fill_solenoidal_blob(st.u, ic.amplitude_u, ic.width);
  }  // "zero": constructor already zeroed it

  if (ic.q_kind == "gaussian_blob") {
    fill_gaussian_blob_q(st.q, ic.amplitude_q, ic.width);
    st.q.sync_spec();
    dealias(st.q);
    st.q.sync_real();
    rescale_sup(st.q, ic.amplitude_q);
  } else if (ic.q_kind == "random_smooth") {
    fill_random_smooth_q(st.q, ic.width, ic.seed);
    rescale_sup(st.q, ic.amplitude_q);
  }

  st.u.sync_both();
  st.q.sync_both();
  return st;
}

}  // namespace qbe
