#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "qbe/dynamics.hpp"
#include "qbe/gridops.hpp"
#include "qbe/potential.hpp"

using namespace qbe;

namespace {

// hand-built Taylor-Green velocity, single wavenumber kk = 2 pi / L
void fill_tg(VecField& u, double amp) {
  const auto& g = u.grid();
  const double kk = 2.0 * M_PI / g.L;
  auto ux = u.real_overwrite(0);
  auto uy = u.real_overwrite(1);
  auto uz = u.real_overwrite(2);
  for (int z = 0; z < g.n; ++z)
    for (int y = 0; y < g.n; ++y)
      for (int x = 0; x < g.n; ++x) {
        const std::size_t i = g.real_index(x, y, z);
        const double px = kk * x * g.dx(), py = kk * y * g.dx(), pz = kk * z * g.dx();
        ux[i] = amp * std::sin(px) * std::cos(py) * std::cos(pz);
        uy[i] = -amp * std::cos(px) * std::sin(py) * std::cos(pz);
        uz[i] = 0.0;
      }
  u.solenoidal = true;
}

// low-wavenumber Q field: one cosine mode per component, |k| <= 1 per axis,
// so even cubic products stay inside the dealiased band
void fill_low_mode_q(QField& q, double amp) {
  const auto& g = q.grid();
  const double kk = 2.0 * M_PI / g.L;
  const int kxs[5] = {1, 0, 1, 0, 1};
  const int kys[5] = {0, 1, 1, 0, 0};
  const int kzs[5] = {0, 0, 0, 1, 1};
  for (int c = 0; c < 5; ++c) {
    auto qc = q.real_overwrite(c);
    const double a = amp * (1.0 - 0.11 * c);
    for (int z = 0; z < g.n; ++z)
      for (int y = 0; y < g.n; ++y)
        for (int x = 0; x < g.n; ++x) {
          const double ph = kk * (kxs[c] * x + kys[c] * y + kzs[c] * z) * g.dx();
          qc[g.real_index(x, y, z)] = a * std::cos(ph + 0.3 * c);
        }
  }
}

SymTraceless3 q_point(QField& q, std::size_t i) {
  SymTraceless3 v;
  for (int c = 0; c < 5; ++c) v[c] = q.real(c)[i];
  return v;
}

Mat3 mat_point(Mat3Field& f, std::size_t i) {
  Mat3 m;
  for (int c = 0; c < 9; ++c) m.m[c] = f.real(c)[i];
  return m;
}

// the stretching source written out once more, straight from its definition
Mat3 s_reference(const Mat3& g, const Mat3& qm, double xi) {
  const Mat3 w = 0.5 * (g - g.transpose());
  const Mat3 eps = 0.5 * (g + g.transpose());
  const Mat3 m = qm + (1.0 / 3.0) * Mat3::identity();
  const Mat3 a = xi * eps + w;
  const Mat3 b = xi * eps - w;
  return a * m + m * b - (2.0 * xi * frobenius_inner(qm, g)) * m;
}

double bytes_differ(VecField& a, VecField& b) {
  a.sync_real();
  b.sync_real();
  for (int c = 0; c < 3; ++c)
    if (std::memcmp(a.real(c).data(), b.real(c).data(),
                    sizeof(double) * a.grid().n_real()) != 0)
      return true;
  return false;
}

}  // namespace

TEST_CASE("molecular field of a constant tensor is minus the projected gradient") {
  PeriodicGrid g{16, 2.0 * M_PI};
  const PolynomialPotential pot(1.0, 0.5, 1.0);
  QField q(g);
  SymTraceless3 q0;
  q0[0] = 0.4;
  q0[3] = -0.2;
  for (int c = 0; c < 5; ++c) {
    auto s = q.real_overwrite(c);
    std::fill(s.begin(), s.end(), q0[c]);
  }
  QField h = molecular_field(q, pot);
  h.sync_real();
  const SymTraceless3 want = -1.0 * pot.projected_gradient(q0);
  for (int c = 0; c < 5; ++c)
    for (std::size_t i : {std::size_t(0), g.n_real() / 2, g.n_real() - 1})
      CHECK(h.real(c)[i] == doctest::Approx(want[c]).epsilon(1e-11));
}

TEST_CASE("molecular field of a single sine mode: exact Laplacian plus reaction") {
  PeriodicGrid g{16, 2.0 * M_PI};
  const PolynomialPotential pot(1.0, 0.5, 1.0);
  QField q(g);
  const double eps = 0.3;
  for (int c = 0; c < 5; ++c) {
    auto s = q.real_overwrite(c);
    std::fill(s.begin(), s.end(), 0.0);
  }
  {
    auto s = q.real_rw(2);
    for (int z = 0; z < g.n; ++z)
      for (int y = 0; y < g.n; ++y)
        for (int x = 0; x < g.n; ++x)
          s[g.real_index(x, y, z)] = eps * std::sin(x * g.dx());
  }
  QField h = molecular_field(q, pot);
  h.sync_real();
  double err = 0.0;
  for (std::size_t i = 0; i < g.n_real(); ++i) {
    const SymTraceless3 qp = q_point(q, i);
    const SymTraceless3 want = -1.0 * qp - pot.projected_gradient(qp);
    for (int c = 0; c < 5; ++c) err = std::max(err, std::fabs(h.real(c)[i] - want[c]));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("velocity gradient of the Taylor-Green field matches the analytic one") {
  PeriodicGrid g{16, 2.0 * M_PI};
  VecField u(g);
  const double A = 0.8;
  fill_tg(u, A);
  Mat3Field gu = velocity_gradient(u);
  double err = 0.0;
  for (int z = 0; z < g.n; ++z)
    for (int y = 0; y < g.n; ++y)
      for (int x = 0; x < g.n; ++x) {
        const std::size_t i = g.real_index(x, y, z);
        const double cx = std::cos(x * g.dx()), sx = std::sin(x * g.dx());
        const double cy = std::cos(y * g.dx()), sy = std::sin(y * g.dx());
        const double cz = std::cos(z * g.dx()), sz = std::sin(z * g.dx());
        const double want[9] = {
            A * cx * cy * cz,  A * sx * sy * cz,  0.0,   // d_x u_j
            -A * sx * sy * cz, -A * cx * cy * cz, 0.0,   // d_y u_j
            -A * sx * cy * sz, A * cx * sy * sz,  0.0};  // d_z u_j
        for (int c = 0; c < 9; ++c)
          err = std::max(err, std::fabs(gu.real(c)[i] - want[c]));
      }
  CHECK(err <= 1e-12);
  // trace of the gradient is the divergence: zero for this field
  for (std::size_t i : {std::size_t(1), g.n_real() / 3})
    CHECK(std::fabs(mat_point(gu, i).trace()) <= 1e-13);
}

TEST_CASE("stretching source matches its definition pointwise") {
  PeriodicGrid g{16, 2.0 * M_PI};
  VecField u(g);
  QField q(g);
  fill_tg(u, 0.7);
  fill_low_mode_q(q, 0.3);
  Mat3Field gu = velocity_gradient(u);
  for (double xi : {0.0, 0.7}) {
    QField s = tensor_S(gu, q, xi);
    s.sync_real();
    double err = 0.0;
    for (std::size_t i = 0; i < g.n_real(); i += 7) {
      const Mat3 gm = mat_point(gu, i);
      const Mat3 qm = q_point(q, i).to_mat();
      const SymTraceless3 want = SymTraceless3::from_mat(s_reference(gm, qm, xi));
      for (int c = 0; c < 5; ++c) err = std::max(err, std::fabs(s.real(c)[i] - want[c]));
    }
    CHECK(err <= 1e-13);
  }
}

TEST_CASE("corotational stretching is orthogonal to Q pointwise") {
  PeriodicGrid g{16, 2.0 * M_PI};
  VecField u(g);
  QField q(g);
  fill_tg(u, 1.1);
  fill_low_mode_q(q, 0.5);
  Mat3Field gu = velocity_gradient(u);
  QField s = tensor_S(gu, q, 0.0);
  s.sync_real();
  double err = 0.0;
  for (std::size_t i = 0; i < g.n_real(); ++i) {
    double dot = 0.0;
    for (int c = 0; c < 5; ++c) dot += s.real(c)[i] * q.real(c)[i];
    err = std::max(err, std::fabs(dot));
  }
  CHECK(err <= 1e-13);
}

TEST_CASE("distortion stress matches its definition pointwise") {
  PeriodicGrid g{16, 2.0 * M_PI};
  QField q(g), h(g);
  fill_low_mode_q(q, 0.4);
  fill_low_mode_q(h, 0.9);  // any tensor field works for the algebra check
  GridField<15> gq = component_gradient(q);
  for (double xi : {0.0, 0.45}) {
    Mat3Field sig = tensor_Sigma(q, h, xi);
    sig.sync_real();
    double err = 0.0;
    for (std::size_t i = 0; i < g.n_real(); i += 11) {
      const Mat3 qm = q_point(q, i).to_mat();
      const Mat3 hm = q_point(h, i).to_mat();
      Mat3 want = hm * qm - qm * hm;
      if (xi != 0.0) {
        const Mat3 m = qm + (1.0 / 3.0) * Mat3::identity();
        want += (2.0 * xi * frobenius_inner(hm, qm)) * m - xi * (hm * m - m * hm);
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double d = 0.0;
          for (int m = 0; m < 5; ++m) d += gq.real(3 * m + a)[i] * gq.real(3 * m + b)[i];
          want(a, b) -= d;
        }
      for (int c = 0; c < 9; ++c)
        err = std::max(err, std::fabs(sig.real(c)[i] - want.m[c]));
    }
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("linearized velocity follows the heat semigroup exactly") {
  auto st = test::random_state(16, 2.0 * M_PI, 0.0, 0.0, 1u);
  fill_tg(st.u, 0.9);
  helmholtz_project(st.u);
  dealias(st.u);
  st.u.sync_both();
  VecField u0 = st.u;
  const PolynomialPotential pot(1.0, 0.0, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  mp.linearized = true;
  const double dt = 1e-3;
  const int steps = 100;
  for (int k = 0; k < steps; ++k) step(st, mp, dt);
  // every Taylor-Green mode has |xi|^2 = 3
  const double fac = std::exp(-3.0 * steps * dt);
  st.u.sync_real();
  u0.sync_real();
  double err = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < st.u.grid().n_real(); ++i)
      err = std::max(err, std::fabs(st.u.real(c)[i] - fac * u0.real(c)[i]));
  CHECK(err <= 1e-12 * 0.9);
  CHECK(st.t == doctest::Approx(steps * dt).epsilon(1e-12));
}

TEST_CASE("linearized tensor integrates at second order against the exact solution") {
  const double a = 1.0, T = 0.1;
  const PolynomialPotential pot(a, 0.0, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  mp.linearized = true;

  auto make_state = [&]() { return test::random_state(16, 2.0 * M_PI, 0.0, 0.25, 5u); };

  // exact solution: every mode decays by exp(-(|xi|^2 + a) T)
  auto st_exact = make_state();
  const PeriodicGrid g = st_exact.q.grid();
  const auto& ws = workspace_for(g);
  st_exact.q.sync_spec();
  const int sx = g.n / 2 + 1;
  for (int c = 0; c < 5; ++c) {
    auto sp = st_exact.q.spec_rw(c);
    for (std::size_t s = 0; s < sp.size(); ++s) {
      const int i = int(s % sx);
      const int j = int((s / sx) % g.n);
      const int k = int(s / (std::size_t(sx) * g.n));
      const double x2 = ws.xix(i) * ws.xix(i) + ws.xiy(j) * ws.xiy(j) + ws.xiz(k) * ws.xiz(k);
      sp[s] *= std::exp(-(x2 + a) * T);
    }
  }
  st_exact.q.sync_real();

  auto err_for = [&](double dt) {
    auto st = make_state();
    const long long n = std::llround(T / dt);
    for (long long k = 0; k < n; ++k) step(st, mp, dt);
    st.q.sync_real();
    double e = 0.0;
    for (int c = 0; c < 5; ++c)
      for (std::size_t i = 0; i < g.n_real(); ++i)
        e = std::max(e, std::fabs(st.q.real(c)[i] - st_exact.q.real(c)[i]));
    return e;
  };

  const double e1 = err_for(5e-3);
  const double e2 = err_for(2.5e-3);
  CHECK(e1 > 1e-12);  // above roundoff, so the ratio is meaningful
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("full nonlinear step converges at second order under step halving") {
  const PolynomialPotential pot(1.0, 0.5, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  const double T = 0.05;

  auto final_q = [&](double dt) {
    auto st = test::random_state(16, 2.0 * M_PI, 0.3, 0.2, 9u);
    const long long n = std::llround(T / dt);
    for (long long k = 0; k < n; ++k) step(st, mp, dt);
    st.q.sync_real();
    return st;
  };

  auto diff = [&](State& a, State& b) {
    double e = 0.0;
    for (int c = 0; c < 5; ++c)
      for (std::size_t i = 0; i < a.q.grid().n_real(); ++i)
        e = std::max(e, std::fabs(a.q.real(c)[i] - b.q.real(c)[i]));
    return e;
  };

  auto s1 = final_q(5e-3);
  auto s2 = final_q(2.5e-3);
  auto s3 = final_q(1.25e-3);
  const double e12 = diff(s1, s2);
  const double e23 = diff(s2, s3);
  CHECK(e12 > 1e-13);
  CHECK(e12 / e23 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("oversized step against the advection bound is rejected without touching the state") {
  auto st = test::random_state(16, 2.0 * M_PI, 0.0, 0.1, 13u);
  fill_tg(st.u, 50.0);
  st.u.sync_both();
  VecField u_before = st.u;
  const PolynomialPotential pot(1.0, 0.0, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  const double dt = 0.1;
  bool thrown = false;
  try {
    step(st, mp, dt);
  } catch (const CflViolation& e) {
    thrown = true;
    CHECK(e.requested_dt == dt);
    CHECK(e.advisory_dt < dt);
    CHECK(e.advisory_dt > 0.0);
    // consistent with the documented bound dt <= safety * dx / max|u|
    const double expect = 0.5 * st.u.grid().dx() / max_speed(st.u);
    CHECK(e.advisory_dt == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(thrown);
  CHECK(st.t == 0.0);
  CHECK_FALSE(bytes_differ(st.u, u_before));
}

TEST_CASE("non-finite data raises a numerical failure") {
  const PolynomialPotential pot(1.0, 0.0, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  {
    auto st = test::random_state(16, 2.0 * M_PI, 0.2, 0.1, 14u);
    st.u.real_rw(0)[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(st, mp, 1e-3), NumericalFailure);
  }
  {
    auto st = test::random_state(16, 2.0 * M_PI, 0.2, 0.1, 15u);
    st.q.real_rw(2)[17] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(st, mp, 1e-3), NumericalFailure);
  }
}

TEST_CASE("step argument validation") {
  auto st = test::random_state(16, 2.0 * M_PI, 0.1, 0.1, 16u);
  const PolynomialPotential pot(1.0, 0.0, 1.0);
  ModelParams mp;
  mp.potential = &pot;
  CHECK_THROWS_AS(step(st, mp, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(st, mp, -1e-3), std::invalid_argument);
  ModelParams no_pot;
  CHECK_THROWS_AS(step(st, no_pot, 1e-3), std::invalid_argument);
}

TEST_CASE("max_speed reports the sup of the pointwise magnitude") {
  PeriodicGrid g{16, 2.0 * M_PI};
  VecField u(g);
  fill_tg(u, 2.5);
  CHECK(max_speed(u) == doctest::Approx(2.5).epsilon(1e-12));
}
