#pragma once

// Spectral operators and quadratures on grid fields.  Operators take
// non-const references because they may populate the missing cached
// representation of their input.  Every reduction is a fixed-tree
// pairwise sum over a deterministic index order.

#include <array>
#include <cmath>
#include <span>
#include <utility>

#include "qbe/field.hpp"
#include "qbe/reduce.hpp"

namespace qbe {

// ---- span-level kernels on one spectral component -------------------------
void deriv_spec(const PeriodicGrid& g, std::span<const cplx> in, int axis,
                std::span<cplx> out);                                   // i xi_axis
void laplacian_spec(const PeriodicGrid& g, std::span<const cplx> in,
                    std::span<cplx> out);                               // -|xi|^2
void dealias_spec(const PeriodicGrid& g, std::span<cplx> inout);        // zero |k| > n/3
double spec_norm2(const PeriodicGrid& g, std::span<const cplx> c);      // sum w |c|^2
double spec_grad_norm2(const PeriodicGrid& g, std::span<const cplx> c); // sum w |xi|^2 |c|^2

// ---- typed operators -------------------------------------------------------
VecField gradient(ScalarField& f);
ScalarField divergence(VecField& v);

template <int NC>
GridField<NC> laplacian(GridField<NC>& f) {
  GridField<NC> r(f.grid());
  f.sync_spec();
  for (int c = 0; c < NC; ++c) laplacian_spec(f.grid(), f.spec(c), r.spec_overwrite(c));
  return r;
}

// all first derivatives of every component: output component 3c + axis
// holds d_axis f_c, with valid real samples
template <int NC>
GridField<3 * NC> component_gradient(GridField<NC>& f) {
  GridField<3 * NC> g(f.grid());
  f.sync_spec();
  for (int c = 0; c < NC; ++c)
    for (int axis = 0; axis < 3; ++axis)
      deriv_spec(f.grid(), f.spec(c), axis, g.spec_overwrite(3 * c + axis));
  g.sync_real();
  return g;
}

// Leray projection onto divergence-free fields; the mean (k = 0) mode is
// kept as is.  Marks the field solenoidal.
void helmholtz_project(VecField& v);

// max_k |xi . vhat_k|, for divergence diagnostics
double max_spectral_divergence(VecField& v);

template <int NC>
void dealias(GridField<NC>& f) {
  f.sync_spec();
  for (int c = 0; c < NC; ++c) dealias_spec(f.grid(), f.spec_rw(c));
}

// L^2 mass of u split at shell radius R: (integral over |xi| < R, rest).
// Shell membership uses the true mode magnitude; low + high = ||u||_2^2.
std::pair<double, double> spectral_energy_split(VecField& v, double R);

// ---- quadratures and norms -------------------------------------------------
// integral over the box of sum_c f_c(x)^2, from real samples
template <int NC>
double real_l2sq(GridField<NC>& f) {
  const auto& g = f.grid();
  f.sync_real();
  const double w = g.L * g.L * g.L / double(g.n_real());
  std::array<std::span<const double>, NC> comp;
  for (int c = 0; c < NC; ++c) comp[c] = f.real(c);
  return w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    double s = 0.0;
    for (int c = 0; c < NC; ++c) s += comp[c][i] * comp[c][i];
    return s;
  });
}

// same integral from spectral coefficients (Plancherel)
template <int NC>
double spec_l2sq(GridField<NC>& f) {
  const auto& g = f.grid();
  f.sync_spec();
  double s = 0.0;
  for (int c = 0; c < NC; ++c) s += spec_norm2(g, f.spec(c));
  return g.L * g.L * g.L * s;
}

// integral of sum_c |grad f_c|^2 (spectral)
template <int NC>
double grad_l2sq(GridField<NC>& f) {
  const auto& g = f.grid();
  f.sync_spec();
  double s = 0.0;
  for (int c = 0; c < NC; ++c) s += spec_grad_norm2(g, f.spec(c));
  return g.L * g.L * g.L * s;
}

// L^p norm of the pointwise Euclidean magnitude |f(x)| = sqrt(sum_c f_c^2)
template <int NC>
double lp_norm_pointwise(GridField<NC>& f, double p) {
  const auto& g = f.grid();
  f.sync_real();
  const double w = g.L * g.L * g.L / double(g.n_real());
  std::array<std::span<const double>, NC> comp;
  for (int c = 0; c < NC; ++c) comp[c] = f.real(c);
  const double s = pairwise_sum(g.n_real(), [&](std::size_t i) {
    double n2 = 0.0;
    for (int c = 0; c < NC; ++c) n2 += comp[c][i] * comp[c][i];
    return std::pow(n2, 0.5 * p);
  });
  return std::pow(w * s, 1.0 / p);
}

// sup over grid points of the pointwise magnitude; NaN anywhere yields NaN
template <int NC>
double linf_pointwise(GridField<NC>& f) {
  const auto& g = f.grid();
  f.sync_real();
  std::array<std::span<const double>, NC> comp;
  for (int c = 0; c < NC; ++c) comp[c] = f.real(c);
  const double m = pairwise_max(g.n_real(), [&](std::size_t i) {
    double n2 = 0.0;
    for (int c = 0; c < NC; ++c) n2 += comp[c][i] * comp[c][i];
    return n2;
  });
  return std::sqrt(m);
}

// integral over the box of a real scalar sample array
double integral_real(const PeriodicGrid& g, std::span<const double> f);

}  // namespace qbe
