#include "qbe/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace qbe {

double Potential::curvature_at_zero() const {
  SymTraceless3 u;  // B0 direction
  u[0] = 1.0;
  const double h = 1e-4;
  const double fp = value(u * h), fm = value(u * (-h)), f0 = value(SymTraceless3{});
  return (fp - 2.0 * f0 + fm) / (h * h);
}

double PolynomialPotential::value(const SymTraceless3& q) const {
  const double n2 = q.norm2();
  return 0.5 * a_ * n2 + (b_ / 3.0) * trace_cube(q) + 0.25 * c_ * n2 * n2;
}

Mat3 PolynomialPotential::gradient(const SymTraceless3& q) const {
  const Mat3 m = q.to_mat();
  return a_ * m + b_ * (m * m) + (c_ * q.norm2()) * m;
}

SymTraceless3 PolynomialPotential::projected_gradient(const SymTraceless3& q) const {
  // aQ + b(Q^2 - |Q|^2/3 I) + c|Q|^2 Q; only the Q^2 term needs projecting.
  const double n2 = q.norm2();
  SymTraceless3 r = q * (a_ + c_ * n2);
  if (b_ != 0.0) r += SymTraceless3::from_mat(square(q)) * b_;
  return r;
}

namespace {

// diag(d(theta)) traceless with |Q| = r: d = r (v1 cos + v2 sin),
// v1 = (1,-1,0)/sqrt2, v2 = (1,1,-2)/sqrt6 orthonormal in the plane sum(d)=0.
SymTraceless3 eigen_sample(double r, double theta) {
  const double s2 = 0.70710678118654752440, s6 = 0.40824829046386301637;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double d0 = r * (s2 * ct + s6 * st);
  const double d1 = r * (-s2 * ct + s6 * st);
  const double d2 = r * (-2.0 * s6 * st);
  Mat3 m;
  m(0, 0) = d0;
  m(1, 1) = d1;
  m(2, 2) = d2;
  return SymTraceless3::from_mat(m);
}

}  // namespace

PotentialHypothesesReport verify_hypotheses(const Potential& pot,
                                            const HypothesesSampling& s) {
  PotentialHypothesesReport rep;
  const int nr = std::max(8, s.n_radial);
  const int na = std::max(16, s.n_angular);
  const double rmax = s.r_max;

  // radial profiles of the worst-case (over the eigenvalue circle) quantities
  const int nr_tot = 2 * nr;  // (0, rmax] for the interior, (rmax, 2 rmax] shell beyond
  std::vector<double> f_min(nr_tot), g_min(nr_tot), quot_min(nr_tot), quot_max(nr_tot);
  std::vector<SymTraceless3> f_arg(nr_tot), g_arg(nr_tot);

  for (int j = 0; j < nr_tot; ++j) {
    const double r = 2.0 * rmax * double(j + 1) / double(nr_tot);
    double fmin = std::numeric_limits<double>::infinity(), gmin = fmin;
    double fmax = -std::numeric_limits<double>::infinity();
    SymTraceless3 farg, garg;
    for (int i = 0; i < na; ++i) {
      const double theta = 2.0 * M_PI * double(i) / double(na);
      const SymTraceless3 q = eigen_sample(r, theta);
      const double f = pot.value(q);
      const double g = frobenius_inner(pot.gradient(q), q.to_mat());
      if (f < fmin) { fmin = f; farg = q; }
      if (g < gmin) { gmin = g; garg = q; }
      fmax = std::max(fmax, f);
      ++rep.samples;
    }
    f_min[j] = fmin;
    g_min[j] = gmin;
    quot_min[j] = fmin / (r * r);
    quot_max[j] = fmax / (r * r);
    f_arg[j] = farg;
    g_arg[j] = garg;
  }

  // positivity of F away from 0 over the whole sampled region
  rep.positivity_ok = true;
  for (int j = 0; j < nr_tot; ++j) {
    if (!(f_min[j] > 0.0)) {
      rep.positivity_ok = false;
      if (!rep.witness) rep.witness = f_arg[j];
      break;
    }
  }

  // largest prefix of radii with dF:Q >= 0 (inner region)
  int j1 = -1;
  while (j1 + 1 < nr && g_min[j1 + 1] >= 0.0) ++j1;
  // earliest suffix start with dF:Q >= 0 through the outer shell
  int j2 = nr_tot;
  while (j2 - 1 >= 0 && g_min[j2 - 1] >= 0.0) --j2;

  const auto radius = [&](int j) { return 2.0 * rmax * double(j + 1) / double(nr_tot); };

  if (j1 < 0 || j2 >= nr_tot) {
    rep.growth_ok = false;
    if (!rep.witness) rep.witness = g_arg[j1 < 0 ? 0 : nr_tot - 1];
    rep.r1 = 0.0;
    rep.r2 = 0.0;
  } else if (j2 == 0) {
    // dF:Q >= 0 everywhere sampled: any split works; keep r1 < r2 inside range.
    rep.growth_ok = true;
    rep.r1 = 0.5 * rmax;
    rep.r2 = rmax;
  } else {
    rep.growth_ok = true;
    rep.r1 = radius(std::min(j1, nr - 1));
    rep.r2 = radius(j2);
    if (rep.r2 <= rep.r1) rep.r1 = 0.5 * rep.r2;
  }

  if (rep.growth_ok) {
    double lam = std::numeric_limits<double>::infinity();
    double alp = 0.0;
    for (int j = 0; j < nr_tot; ++j) {
      const double r = radius(j);
      if (r <= rep.r1) lam = std::min(lam, quot_min[j]);
      if (r <= rep.r2) alp = std::max(alp, quot_max[j]);
    }
    if (std::isfinite(lam) && lam > 0.0) rep.lambda = lam;
    rep.alpha = alp;
  }
  return rep;
}

std::string describe(const PotentialHypothesesReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "positivity_ok=%d growth_ok=%d r1=%.6g r2=%.6g lambda=%s alpha=%.6g samples=%ld",
                rep.positivity_ok ? 1 : 0, rep.growth_ok ? 1 : 0, rep.r1, rep.r2,
                rep.lambda ? std::to_string(*rep.lambda).c_str() : "none", rep.alpha,
                rep.samples);
  return buf;
}

}  // namespace qbe
