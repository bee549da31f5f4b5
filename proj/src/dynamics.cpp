#include "qbe/dynamics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "qbe/parallel.hpp"

namespace qbe {

namespace {

// gather the five components of a tensor field at one grid point
inline SymTraceless3 q_at(const std::array<std::span<const double>, 5>& c, std::size_t i) {
  SymTraceless3 q;
  for (int m = 0; m < 5; ++m) q[m] = c[m][i];
  return q;
}

template <int NC>
std::array<std::span<const double>, NC> real_spans(GridField<NC>& f) {
  f.sync_real();
  std::array<std::span<const double>, NC> r;
  for (int c = 0; c < NC; ++c) r[c] = f.real(c);
  return r;
}

}  // namespace

double max_speed(VecField& u) {
  return linf_pointwise(u);
}

Mat3Field velocity_gradient(VecField& u) {
  Mat3Field g(u.grid());
  u.sync_spec();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      deriv_spec(u.grid(), u.spec(j), i, g.spec_overwrite(3 * i + j));
  g.sync_real();
  return g;
}

QField molecular_field(QField& q, const Potential& pot) {
  QField h = laplacian(q);
  h.sync_real();
  const auto qs = real_spans(q);
  std::array<std::span<double>, 5> hs;
  for (int m = 0; m < 5; ++m) hs[m] = h.real_rw(m);
  parallel_for(std::ptrdiff_t(q.grid().n_real()), [&](std::ptrdiff_t i) {
    const SymTraceless3 g = pot.projected_gradient(q_at(qs, std::size_t(i)));
    for (int m = 0; m < 5; ++m) hs[m][i] -= g[m];
  });
  return h;
}

QField tensor_S(Mat3Field& grad_u, QField& q, double xi) {
  QField s(q.grid());
  const auto qs = real_spans(q);
  const auto gs = real_spans(grad_u);
  std::array<std::span<double>, 5> out;
  for (int m = 0; m < 5; ++m) out[m] = s.real_overwrite(m);
  const Mat3 third = Mat3::identity() * (1.0 / 3.0);
  parallel_for(std::ptrdiff_t(q.grid().n_real()), [&](std::ptrdiff_t i) {
    Mat3 g;
    for (int k = 0; k < 9; ++k) g.m[k] = gs[k][i];
    const Mat3 gt = g.transpose();
    const Mat3 w = 0.5 * (g - gt);
    const Mat3 qm = q_at(qs, std::size_t(i)).to_mat();
    Mat3 sm;
    if (xi == 0.0) {
      sm = w * qm - qm * w;
    } else {
      const Mat3 m = qm + third;
      const Mat3 eps = 0.5 * (g + gt);
      const Mat3 a = xi * eps + w, b = xi * eps - w;
      sm = a * m + m * b - (2.0 * xi * frobenius_inner(qm, g)) * m;
    }
    const SymTraceless3 sv = SymTraceless3::from_mat(sm);
    for (int c = 0; c < 5; ++c) out[c][i] = sv[c];
  });
  return s;
}

Mat3Field tensor_Sigma(QField& q, QField& h, double xi) {
  Mat3Field sig(q.grid());
  GridField<15> gq = component_gradient(q);
  const auto qs = real_spans(q);
  const auto hs = real_spans(h);
  const auto gs = real_spans(gq);
  std::array<std::span<double>, 9> out;
  for (int c = 0; c < 9; ++c) out[c] = sig.real_overwrite(c);
  const Mat3 third = Mat3::identity() * (1.0 / 3.0);
  parallel_for(std::ptrdiff_t(q.grid().n_real()), [&](std::ptrdiff_t i) {
    const Mat3 qm = q_at(qs, std::size_t(i)).to_mat();
    const Mat3 hm = q_at(hs, std::size_t(i)).to_mat();
    Mat3 sm = hm * qm - qm * hm;  // -(QH - HQ)
    if (xi != 0.0) {
      const Mat3 m = qm + third;
      const double hq = frobenius_inner(hm, qm);
      sm += (2.0 * xi * hq) * m - xi * (hm * m - m * hm);
    }
    // kinetic distortion (grad Q ⊙ grad Q)_ij = d_i Q : d_j Q, computed in
    // the orthonormal component basis
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double d = 0.0;
        for (int m = 0; m < 5; ++m) d += gs[3 * m + a][i] * gs[3 * m + b][i];
        sm(a, b) -= d;
      }
    for (int c = 0; c < 9; ++c) out[c][i] = sm.m[c];
  });
  return sig;
}

namespace {

// nonlinear (non-diffusive) part of the Q right-hand side, dealiased spectra
QField q_nonlinear(State& st, const ModelParams& mp) {
  const PeriodicGrid g = st.q.grid();
  QField n(g);
  if (mp.linearized) {
    const double a = mp.potential->curvature_at_zero();
    st.q.sync_spec();
    for (int m = 0; m < 5; ++m) {
      auto in = st.q.spec(m);
      auto out = n.spec_overwrite(m);
      parallel_for(std::ptrdiff_t(in.size()), [&](std::ptrdiff_t s) { out[s] = -a * in[s]; });
    }
    return n;
  }

  st.q.sync_both();
  st.u.sync_both();

  // reaction and stretching sources, assembled pointwise then transformed
  QField s(g);
  if (mp.xi == 0.0) {
    // corotational case: only the vorticity enters, so transform its three
    // independent entries instead of the full velocity gradient
    GridField<3> vort(g);
    std::vector<cplx> da(g.n_spec()), db(g.n_spec());
    constexpr int wi[3] = {0, 0, 1}, wj[3] = {1, 2, 2};
    for (int c = 0; c < 3; ++c) {
      deriv_spec(g, st.u.spec(wj[c]), wi[c], da);
      deriv_spec(g, st.u.spec(wi[c]), wj[c], db);
      auto out = vort.spec_overwrite(c);
      parallel_for(std::ptrdiff_t(g.n_spec()), [&](std::ptrdiff_t sidx) {
        out[sidx] = 0.5 * (da[sidx] - db[sidx]);
      });
    }
    const auto wv = real_spans(vort);
    const auto qs = real_spans(st.q);
    std::array<std::span<double>, 5> out;
    for (int m = 0; m < 5; ++m) out[m] = s.real_overwrite(m);
    parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t i) {
      Mat3 w;
      w(0, 0) = 0.0;       w(0, 1) = wv[0][i];  w(0, 2) = wv[1][i];
      w(1, 0) = -wv[0][i]; w(1, 1) = 0.0;       w(1, 2) = wv[2][i];
      w(2, 0) = -wv[1][i]; w(2, 1) = -wv[2][i]; w(2, 2) = 0.0;
      const Mat3 qm = q_at(qs, std::size_t(i)).to_mat();
      const SymTraceless3 sv = SymTraceless3::from_mat(w * qm - qm * w);
      for (int m = 0; m < 5; ++m) out[m][i] = sv[m];
    });
  } else {
    Mat3Field gu = velocity_gradient(st.u);
    s = tensor_S(gu, st.q, mp.xi);
  }
  {
    const auto qs = real_spans(st.q);
    const Potential& pot = *mp.potential;
    std::array<std::span<double>, 5> sv;
    for (int m = 0; m < 5; ++m) sv[m] = s.real_rw(m);
    parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t i) {
      const SymTraceless3 pg = pot.projected_gradient(q_at(qs, std::size_t(i)));
      for (int m = 0; m < 5; ++m) sv[m][i] -= pg[m];
    });
  }
  s.sync_spec();

  // conservative advection: - d_k (Q_m u_k)
  std::vector<double> prod(g.n_real());
  std::vector<cplx> phat(g.n_spec()), dhat(g.n_spec());
  const auto& ws = workspace_for(g);
  for (int m = 0; m < 5; ++m) {
    auto qm = st.q.real(m);
    auto out = n.spec_overwrite(m);
    auto sm = s.spec(m);
    for (std::size_t sidx = 0; sidx < g.n_spec(); ++sidx) out[sidx] = sm[sidx];
    for (int k = 0; k < 3; ++k) {
      auto uk = st.u.real(k);
      parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t i) {
        prod[i] = qm[i] * uk[i];
      });
      ws.forward(prod, phat);
      deriv_spec(g, phat, k, dhat);
      parallel_for(std::ptrdiff_t(g.n_spec()), [&](std::ptrdiff_t sidx) {
        out[sidx] -= dhat[sidx];
      });
    }
    dealias_spec(g, out);
  }
  return n;
}

// nonlinear part of the u right-hand side: P div(Sigma - u ⊗ u), dealiased
VecField u_nonlinear(State& st, const ModelParams& mp) {
  const PeriodicGrid g = st.u.grid();
  VecField n(g);
  if (mp.linearized) {
    for (int c = 0; c < 3; ++c) n.spec_overwrite(c);
    n.solenoidal = true;
    return n;
  }

  st.q.sync_both();
  st.u.sync_both();

  QField h = (mp.xi == 0.0) ? laplacian(st.q) : molecular_field(st.q, *mp.potential);
  Mat3Field t = tensor_Sigma(st.q, h, mp.xi);
  {
    std::array<std::span<const double>, 3> us;
    for (int c = 0; c < 3; ++c) us[c] = st.u.real(c);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        auto tc = t.real_rw(3 * a + b);
        parallel_for(std::ptrdiff_t(g.n_real()), [&](std::ptrdiff_t i) {
          tc[i] -= us[a][i] * us[b][i];
        });
      }
  }
  t.sync_spec();

  // force_i = d_j T_ij
  std::vector<cplx> dhat(g.n_spec());
  for (int i = 0; i < 3; ++i) {
    auto out = n.spec_overwrite(i);
    for (int j = 0; j < 3; ++j) {
      deriv_spec(g, t.spec(3 * i + j), j, dhat);
      parallel_for(std::ptrdiff_t(g.n_spec()), [&](std::ptrdiff_t s) { out[s] += dhat[s]; });
    }
    dealias_spec(g, out);
  }
  helmholtz_project(n);
  return n;
}

// a run reuses one dt for thousands of steps, so the factor tables are kept
// for the process lifetime, mirroring the workspace cache
const std::vector<double>& heat_factor(const PeriodicGrid& g, double dt) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.try_emplace({g.n, g.L, dt});
  std::vector<double>& fac = it->second;
  if (fresh) {
    const auto xi2 = workspace_for(g).xi2_flat();
    fac.resize(g.n_spec());
    parallel_for(std::ptrdiff_t(g.n_spec()), [&](std::ptrdiff_t s) {
      fac[s] = std::exp(-xi2[s] * dt);
    });
  }
  return fac;
}

bool has_nan(State& st) {
  return !(max_speed(st.u) >= 0.0) || !(linf_pointwise(st.q) >= 0.0);
}

}  // namespace

QField q_rhs(State& st, const ModelParams& mp) {
  QField n = q_nonlinear(st, mp);
  st.q.sync_spec();
  for (int m = 0; m < 5; ++m) {
    std::vector<cplx> lap(st.q.grid().n_spec());
    laplacian_spec(st.q.grid(), st.q.spec(m), lap);
    auto out = n.spec_rw(m);
    for (std::size_t s = 0; s < lap.size(); ++s) out[s] += lap[s];
  }
  return n;
}

VecField u_rhs(State& st, const ModelParams& mp) {
  VecField n = u_nonlinear(st, mp);
  st.u.sync_spec();
  for (int c = 0; c < 3; ++c) {
    std::vector<cplx> lap(st.u.grid().n_spec());
    laplacian_spec(st.u.grid(), st.u.spec(c), lap);
    auto out = n.spec_rw(c);
    for (std::size_t s = 0; s < lap.size(); ++s) out[s] += lap[s];
  }
  return n;
}

void step(State& st, const ModelParams& mp, double dt, const StepControl& sc) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (!mp.potential) throw std::invalid_argument("step: missing potential");
  const PeriodicGrid g = st.q.grid();

  // advection bound (diffusion is integrated exactly and imposes none)
  const double speed = max_speed(st.u);
  if (!(speed >= 0.0)) throw NumericalFailure("step: velocity contains NaN");
  if (speed > 0.0) {
    const double dt_max = sc.cfl_safety * g.dx() / speed;
    if (dt > dt_max) throw CflViolation(dt, dt_max);
  }

  const std::vector<double>& fac = heat_factor(g, dt);

  QField nq1 = q_nonlinear(st, mp);
  VecField nu1 = u_nonlinear(st, mp);

  // predictor: X~ = E (X + dt N(X))
  State mid{st.t + dt, VecField(g), QField(g)};
  st.q.sync_spec();
  st.u.sync_spec();
  for (int m = 0; m < 5; ++m) {
    auto x = st.q.spec(m);
    auto n1 = nq1.spec(m);
    auto out = mid.q.spec_overwrite(m);
    parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
      out[s] = fac[s] * (x[s] + dt * n1[s]);
    });
  }
  for (int c = 0; c < 3; ++c) {
    auto x = st.u.spec(c);
    auto n1 = nu1.spec(c);
    auto out = mid.u.spec_overwrite(c);
    parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
      out[s] = fac[s] * (x[s] + dt * n1[s]);
    });
  }
  helmholtz_project(mid.u);

  QField nq2 = q_nonlinear(mid, mp);
  VecField nu2 = u_nonlinear(mid, mp);

  // corrector: X+ = E X + dt/2 (E N(X) + N(X~))
  for (int m = 0; m < 5; ++m) {
    auto x = st.q.spec(m);
    auto n1 = nq1.spec(m);
    auto n2 = nq2.spec(m);
    auto out = mid.q.spec_overwrite(m);
    parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
      out[s] = fac[s] * x[s] + 0.5 * dt * (fac[s] * n1[s] + n2[s]);
    });
  }
  for (int c = 0; c < 3; ++c) {
    auto x = st.u.spec(c);
    auto n1 = nu1.spec(c);
    auto n2 = nu2.spec(c);
    auto out = mid.u.spec_overwrite(c);
    parallel_for(std::ptrdiff_t(x.size()), [&](std::ptrdiff_t s) {
      out[s] = fac[s] * x[s] + 0.5 * dt * (fac[s] * n1[s] + n2[s]);
    });
  }
  helmholtz_project(mid.u);

  st.q = std::move(mid.q);
  st.u = std::move(mid.u);
  st.t += dt;
  if (has_nan(st)) throw NumericalFailure("step: state left the representable range");
}

}  // namespace qbe
