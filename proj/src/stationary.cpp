#include "qbe/stationary.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qbe/parallel.hpp"
#include "qbe/reduce.hpp"

namespace qbe {

namespace {

inline SymTraceless3 q_at(const std::array<std::span<const double>, 5>& c, std::size_t i) {
  SymTraceless3 q;
  for (int m = 0; m < 5; ++m) q[m] = c[m][i];
  return q;
}

// N(Q) = -L[dF(Q)] as dealiased spectral coefficients
void reaction_spec(QField& q, const Potential& pot, QField& out) {
  const PeriodicGrid g = q.grid();
  q.sync_real();
  std::array<std::span<const double>, 5> qs;
  for (int m = 0; m < 5; ++m) qs[m] = q.real(m);
  std::array<std::span<double>, 5> os;
  for (int m = 0; m < 5; ++m) os[m] = out.real_overwrite(m);
  parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t i) {
    const SymTraceless3 pg = pot.projected_gradient(q_at(qs, std::size_t(i)));
    for (int m = 0; m < 5; ++m) os[m][i] = -pg[m];
  });
  out.sync_spec();
  for (int m = 0; m < 5; ++m) dealias_spec(g, out.spec_rw(m));
}

// || -|xi|^2 qhat + nhat ||_2 over the box: the stationary residual from
// data the flow step already has in hand
double residual_from(QField& q, QField& n) {
  const PeriodicGrid g = q.grid();
  const auto& ws = workspace_for(g);
  q.sync_spec();
  n.sync_spec();
  const int sx = g.n / 2 + 1;
  double acc = 0.0;
  for (int m = 0; m < 5; ++m) {
    auto qh = q.spec(m);
    auto nh = n.spec(m);
    acc += pairwise_sum(g.n_spec(), [&](std::size_t s) {
      const int i = int(s % sx);
      const int j = int((s / sx) % g.n);
      const int k = int(s / (std::size_t(sx) * g.n));
      const double xx = ws.xix(i), xy = ws.xiy(j), xz = ws.xiz(k);
      const double k2 = xx * xx + xy * xy + xz * xz;
      const cplx h = -k2 * qh[s] + nh[s];
      return ws.pweight(i) * std::norm(h);
    });
  }
  return std::sqrt(g.L * g.L * g.L * acc);
}

}  // namespace

std::pair<QField, StationaryReport> gradient_flow(const QField& q0, const Potential& pot,
                                                  const FlowConfig& fc) {
  const PeriodicGrid g = q0.grid();
  QField q = q0;
  StationaryReport rep;

  // The reaction is dealiased and the derivative tables vanish on the
  // unpaired Nyquist planes, so both the evolution and the residual live on
  // the two-thirds band.  Project the data onto that band up front: content
  // beyond it would otherwise sit frozen and invisible to the residual.
  dealias(q);

  double q0_l2;
  {
    QField tmp = q0;
    q0_l2 = std::sqrt(spec_l2sq(tmp));
  }
  const double tol = fc.tol_rel * std::max(1.0, q0_l2);

  const auto& ws = workspace_for(g);
  const int sx = g.n / 2 + 1;
  std::vector<double> fac(g.n_spec());
  parallel_for(std::ptrdiff_t(g.n_spec()), [&](std::ptrdiff_t s) {
    const int i = int(s % sx);
    const int j = int((s / sx) % g.n);
    const int k = int(s / (std::size_t(sx) * g.n));
    const double xx = ws.xix(i), xy = ws.xiy(j), xz = ws.xiz(k);
    fac[s] = std::exp(-(xx * xx + xy * xy + xz * xz) * fc.dt);
  });

  QField n1(g), n2(g), mid(g);
  rep.residual_history.reserve(64);
  for (long it = 0; it < fc.max_iters; ++it) {
    reaction_spec(q, pot, n1);
    const double res = residual_from(q, n1);
    rep.residual_history.push_back(res);
    if (res <= tol) {
      rep.converged = true;
      break;
    }

    q.sync_spec();
    for (int m = 0; m < 5; ++m) {
      auto x = q.spec(m);
      auto a = n1.spec(m);
      auto out = mid.spec_overwrite(m);
      parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
        out[s] = fac[s] * (x[s] + fc.dt * a[s]);
      });
    }
    reaction_spec(mid, pot, n2);
    for (int m = 0; m < 5; ++m) {
      auto x = q.spec(m);
      auto a = n1.spec(m);
      auto b = n2.spec(m);
      auto out = mid.spec_overwrite(m);
      parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
        out[s] = fac[s] * x[s] + 0.5 * fc.dt * (fac[s] * a[s] + b[s]);
      });
    }
    std::swap(q, mid);
    rep.iterations = it + 1;
  }

  rep.stationary_residual = rep.residual_history.empty()
                                ? 0.0
                                : rep.residual_history.back();
  rep.final_sup = linf_pointwise(q);
  rep.pohozaev = pohozaev_residual(q, pot);
  if (const auto* poly = dynamic_cast<const PolynomialPotential*>(&pot))
    rep.pohozaev_combo = pohozaev_combination(q, *poly);
  else
    rep.pohozaev_combo = std::numeric_limits<double>::quiet_NaN();
  return {std::move(q), std::move(rep)};
}

double pohozaev_residual(QField& q, const Potential& pot) {
  const PeriodicGrid g = q.grid();
  const double vol_w = g.L * g.L * g.L / double(g.n_real());
  const double dirichlet = 0.5 * grad_l2sq(q);
  q.sync_real();
  std::array<std::span<const double>, 5> qs;
  for (int m = 0; m < 5; ++m) qs[m] = q.real(m);
  const double bulk = vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    return pot.value(q_at(qs, i));
  });
  return dirichlet + 3.0 * bulk;
}

double pohozaev_combination(QField& q, const PolynomialPotential& pot) {
  const PeriodicGrid g = q.grid();
  const double vol_w = g.L * g.L * g.L / double(g.n_real());
  const double dirichlet = 0.5 * grad_l2sq(q);
  q.sync_real();
  std::array<std::span<const double>, 5> qs;
  for (int m = 0; m < 5; ++m) qs[m] = q.real(m);
  const double a = pot.a(), c = pot.c();
  const double mass = vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    const double z = q_at(qs, i).norm2();
    return 0.5 * a * z - 0.25 * c * z * z;
  });
  return -dirichlet + mass;
}

}  // namespace qbe
