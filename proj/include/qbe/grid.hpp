#pragma once

// Periodic box [0,L)^3 sampled on an n^3 grid, and the FFT workspace
// shared by every field living on that grid.
//
// Conventions (used consistently by every operator in this project):
//  * real storage is x-fastest: index = x + n*(y + n*z);
//  * spectra use the half-complex r2c layout (kx in [0, n/2] fastest);
//  * the forward transform is normalized by 1/n^3, so coefficients are
//    Fourier-series coefficients: f(x) = sum_k fhat_k exp(i xi_k . x)
//    with xi_k = 2 pi k / L, k in (-n/2, n/2];
//  * odd-derivative multipliers vanish on the unpaired Nyquist planes
//    (|k| = n/2), and gradient/divergence/laplacian, the Leray projector
//    and the diffusion semigroup all share these tables, so operator
//    identities hold exactly mode by mode.  Dealiased data (|k| <= n/3,
//    which every run maintains) never populates those planes anyway.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qbe {

using cplx = std::complex<double>;

struct PeriodicGrid {
  int n = 0;      // points per axis, even, >= 8
  double L = 0.0; // box edge length

  bool valid() const { return n >= 8 && n % 2 == 0 && L > 0.0; }
  double dx() const { return L / n; }
  std::size_t n_real() const { return std::size_t(n) * n * n; }
  std::size_t n_spec() const { return std::size_t(n) * n * (n / 2 + 1); }
  std::size_t real_index(int x, int y, int z) const {
    return std::size_t(x) + std::size_t(n) * (std::size_t(y) + std::size_t(n) * z);
  }
  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
    return a.n == b.n && a.L == b.L;
  }
};

// Plans and wavenumber tables for one grid.  Obtained via workspace_for();
// instances are cached per (n, L) and live for the process lifetime.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const PeriodicGrid& g);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const PeriodicGrid& grid() const { return grid_; }

  // one scalar component per call; out-of-place, any (also unaligned) arrays
  void forward(std::span<const double> re, std::span<cplx> sp) const;   // r2c, 1/n^3
  void backward(std::span<const cplx> sp, std::span<double> re) const;  // c2r

  // integer wavenumbers along each axis of the half-complex layout
  int kx_int(int i) const { return i; }
  int ky_int(int j) const { return j <= grid_.n / 2 ? j : j - grid_.n; }
  int kz_int(int k) const { return ky_int(k); }

  // derivative multipliers xi = 2 pi k / L with the Nyquist entry zeroed
  double xix(int i) const { return xix_[i]; }
  double xiy(int j) const { return xiy_[j]; }
  double xiz(int k) const { return xiy_[k]; }

  // Hermitian weight of a stored mode in full-spectrum sums
  double pweight(int i) const { return (i == 0 || i == grid_.n / 2) ? 1.0 : 2.0; }

  // the same weight and |xi|^2 flattened over the half-complex layout, so
  // reduction loops need no per-mode index arithmetic
  std::span<const double> pweight_flat() const { return pw_flat_; }
  std::span<const double> xi2_flat() const { return xi2_flat_; }

 private:
  PeriodicGrid grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  std::vector<double> xix_, xiy_, pw_flat_, xi2_flat_;
  mutable std::vector<cplx> scratch_;  // c2r clobbers its input; feed it a copy
};

const SpectralWorkspace& workspace_for(const PeriodicGrid& g);

}  // namespace qbe
