#include "qbe/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "qbe/bootstrap.hpp"
#include "qbe/reduce.hpp"

namespace qbe {

namespace {

inline SymTraceless3 q_at(const std::array<std::span<const double>, 5>& c, std::size_t i) {
  SymTraceless3 q;
  for (int m = 0; m < 5; ++m) q[m] = c[m][i];
  return q;
}

std::array<std::span<const double>, 5> q_spans(QField& q) {
  q.sync_real();
  std::array<std::span<const double>, 5> r;
  for (int m = 0; m < 5; ++m) r[m] = q.real(m);
  return r;
}

}  // namespace

EnergyReport energy_report(State& st, const ModelParams& mp, double beta,
                           double contamination_time) {
  if (!mp.potential) throw std::invalid_argument("energy_report: missing potential");
  const PeriodicGrid g = st.q.grid();
  const double vol_w = g.L * g.L * g.L / double(g.n_real());

  EnergyReport r;
  r.t = st.t;
  r.e_kinetic = 0.5 * spec_l2sq(st.u);
  r.e_dirichlet = 0.5 * grad_l2sq(st.q);

  const auto qs = q_spans(st.q);
  const Potential& pot = *mp.potential;
  r.e_bulk = vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    return pot.value(q_at(qs, i));
  });
  r.e_total = r.e_kinetic + r.e_dirichlet + r.e_bulk;

  r.d_u = grad_l2sq(st.u);
  {
    QField h = molecular_field(st.q, pot);
    r.d_q = real_l2sq(h);
  }

  r.nrm_u_l2 = std::sqrt(spec_l2sq(st.u));
  r.nrm_q_l1 = lp_norm_pointwise(st.q, 1.0);
  r.nrm_q_l2 = std::sqrt(spec_l2sq(st.q));
  r.nrm_q_linf = linf_pointwise(st.q);
  r.nrm_gradq_l2 = std::sqrt(grad_l2sq(st.q));

  r.shell_r = shell_schedule(st.t, beta);
  const auto [lo, hi] = spectral_energy_split(st.u, r.shell_r);
  r.e_low = lo;
  r.e_high = hi;
  r.box_contaminated = st.t > contamination_time;
  return r;
}

double energy_balance_residual(std::span<const EnergyReport> reps,
                               std::size_t s_idx, std::size_t t_idx) {
  if (t_idx <= s_idx || t_idx >= reps.size())
    throw std::invalid_argument("energy_balance_residual: need s_idx < t_idx < size");
  double diss = 0.0;
  for (std::size_t k = s_idx; k < t_idx; ++k) {
    const double da = reps[k].d_u + reps[k].d_q;
    const double db = reps[k + 1].d_u + reps[k + 1].d_q;
    diss += 0.5 * (da + db) * (reps[k + 1].t - reps[k].t);
  }
  return reps[t_idx].e_total + diss - reps[s_idx].e_total;
}

GSpec GSpec::power(double p, double delta) {
  if (!(p >= 1.0)) throw std::invalid_argument("GSpec::power: need p >= 1");
  if (p < 2.0 && !(delta > 0.0))
    throw std::invalid_argument(
        "GSpec::power: p < 2 is not twice differentiable at 0; a smoothing "
        "floor delta > 0 is required");
  GSpec gs;
  gs.kind = Kind::power;
  gs.p = p;
  gs.delta = delta;
  return gs;
}

GSpec GSpec::clipped_quartic(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("GSpec::clipped_quartic: need r > 0");
  GSpec gs;
  gs.kind = Kind::clipped_quartic;
  gs.r = r;
  return gs;
}

double GSpec::g(double z) const {
  if (kind == Kind::power)
    return std::pow(z + delta * delta, 0.5 * p) - std::pow(delta, p);
  const double w = z - 0.25 * r * r;
  return w > 0.0 ? w * w : 0.0;
}

double GSpec::gp(double z) const {
  if (kind == Kind::power) return 0.5 * p * std::pow(z + delta * delta, 0.5 * p - 1.0);
  const double w = z - 0.25 * r * r;
  return w > 0.0 ? 2.0 * w : 0.0;
}

double GSpec::gpp(double z) const {
  if (kind == Kind::power) {
    const double c2 = 0.5 * p * (0.5 * p - 1.0);
    if (c2 == 0.0) return 0.0;
    return c2 * std::pow(z + delta * delta, 0.5 * p - 2.0);
  }
  return z > 0.25 * r * r ? 2.0 : 0.0;
}

RenormRecord renorm_record(State& st, const Potential& pot, const GSpec& gs) {
  const PeriodicGrid g = st.q.grid();
  const double vol_w = g.L * g.L * g.L / double(g.n_real());
  const auto qs = q_spans(st.q);

  GridField<15> gq = component_gradient(st.q);
  std::array<std::span<const double>, 15> ds;
  for (int c = 0; c < 15; ++c) ds[c] = gq.real(c);

  RenormRecord rec;
  rec.t = st.t;
  rec.phi = vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    return gs.g(q_at(qs, i).norm2());
  });
  rec.drift = vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    const SymTraceless3 q = q_at(qs, i);
    const double z = q.norm2();
    double grad2 = 0.0;
    for (int c = 0; c < 15; ++c) grad2 += ds[c][i] * ds[c][i];
    double gz2 = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      double gz = 0.0;
      for (int m = 0; m < 5; ++m) gz += q[m] * ds[3 * m + axis][i];
      gz2 += 4.0 * gz * gz;  // grad z = 2 sum_m q_m grad q_m
    }
    const SymTraceless3 pg = pot.projected_gradient(q);
    double fq = 0.0;
    for (int m = 0; m < 5; ++m) fq += pg[m] * q[m];
    return 2.0 * gs.gp(z) * grad2 + gs.gpp(z) * gz2 + 2.0 * gs.gp(z) * fq;
  });
  return rec;
}

std::vector<double> renorm_residuals(std::span<const RenormRecord> recs) {
  std::vector<double> res;
  if (recs.size() < 2) return res;
  res.reserve(recs.size() - 1);
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const double dt = recs[k + 1].t - recs[k].t;
    res.push_back((recs[k + 1].phi - recs[k].phi) / dt +
                  0.5 * (recs[k].drift + recs[k + 1].drift));
  }
  return res;
}

double renorm_velocity_channel(State& st, const ModelParams& mp, const GSpec& gs) {
  const PeriodicGrid g = st.q.grid();
  const double vol_w = g.L * g.L * g.L / double(g.n_real());
  st.q.sync_both();
  st.u.sync_both();

  // -div(Q u), conservative form as the integrator uses it
  QField adv(g);
  {
    const auto& ws = workspace_for(g);
    std::vector<double> prod(g.n_real());
    std::vector<cplx> phat(g.n_spec()), dhat(g.n_spec());
    for (int m = 0; m < 5; ++m) {
      auto qm = st.q.real(m);
      auto out = adv.spec_overwrite(m);
      for (int k = 0; k < 3; ++k) {
        auto uk = st.u.real(k);
        for (std::size_t i = 0; i < g.n_real(); ++i) prod[i] = qm[i] * uk[i];
        ws.forward(prod, phat);
        deriv_spec(g, phat, k, dhat);
        for (std::size_t s = 0; s < g.n_spec(); ++s) out[s] -= dhat[s];
      }
    }
    adv.sync_real();
  }

  Mat3Field gu = velocity_gradient(st.u);
  QField s = tensor_S(gu, st.q, mp.xi);

  const auto qs = q_spans(st.q);
  const auto as = q_spans(adv);
  const auto ss = q_spans(s);
  return vol_w * pairwise_sum(g.n_real(), [&](std::size_t i) {
    const SymTraceless3 q = q_at(qs, i);
    double inner = 0.0;
    for (int m = 0; m < 5; ++m) inner += (as[m][i] + ss[m][i]) * q[m];
    return 2.0 * gs.gp(q.norm2()) * inner;
  });
}

double max_principle_excess(std::span<const EnergyReport> reps, double r2) {
  if (reps.empty()) throw std::invalid_argument("max_principle_excess: no records");
  return pairwise_max(reps.size(), [&](std::size_t i) {
    return reps[i].nrm_q_linf - r2;
  });
}

namespace {

DecayFit straight_line_fit(std::span<const EnergyReport> reps,
                           const std::function<double(const EnergyReport&)>& value,
                           double t_lo, double t_hi, bool log_time) {
  std::vector<double> xs, ys;
  for (const EnergyReport& r : reps) {
    if (r.box_contaminated || r.t < t_lo || r.t > t_hi) continue;
    const double v = value(r);
    if (!(v > 0.0)) continue;
    xs.push_back(log_time ? std::log1p(r.t) : r.t);
    ys.push_back(std::log(v));
  }
  const std::size_t n = xs.size();
  if (n < 10)
    throw std::invalid_argument("decay fit: fewer than 10 usable records in window");

  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += xs[i]; sy += ys[i]; }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double icept = my - slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (icept + slope * xs[i]);
    ss_res += e * e;
  }

  DecayFit f;
  f.t_lo = t_lo;
  f.t_hi = t_hi;
  f.exponent = log_time ? slope : -slope;
  f.amplitude = std::exp(icept);
  f.goodness = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.samples = int(n);
  return f;
}

}  // namespace

DecayFit fit_power_decay(std::span<const EnergyReport> reps,
                         const std::function<double(const EnergyReport&)>& value,
                         double t_lo, double t_hi) {
  return straight_line_fit(reps, value, t_lo, t_hi, true);
}

DecayFit fit_exponential_decay(std::span<const EnergyReport> reps,
                               const std::function<double(const EnergyReport&)>& value,
                               double t_lo, double t_hi) {
  return straight_line_fit(reps, value, t_lo, t_hi, false);
}

std::pair<double, double> interpolation_check(QField& q) {
  const double l2 = lp_norm_pointwise(q, 2.0);
  const double l1 = lp_norm_pointwise(q, 1.0);
  const double l6 = lp_norm_pointwise(q, 6.0);
  return {l2, std::pow(l1, 0.4) * std::pow(l6, 0.6)};
}

double gn_l4_ratio(ScalarField& v) {
  VecField grad = gradient(v);
  const double num = std::pow(lp_norm_pointwise(grad, 4.0), 2.0);
  ScalarField lap = laplacian(v);
  const double den = std::sqrt(real_l2sq(lap)) * linf_pointwise(v);
  return den > 0.0 ? num / den : 0.0;
}

const char* const kCsvHeader =
    "t,e_kin,e_dir,e_bulk,e_total,d_u,d_q,nrm_u_l2,nrm_q_l1,nrm_q_l2,"
    "nrm_q_linf,nrm_gradq_l2,e_low,e_high,shell_R,contaminated";

void write_csv_header(std::FILE* f) { std::fprintf(f, "%s\n", kCsvHeader); }

void write_csv_row(std::FILE* f, const EnergyReport& r) {
  std::fprintf(f,
               "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
               "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
               r.t, r.e_kinetic, r.e_dirichlet, r.e_bulk, r.e_total, r.d_u, r.d_q,
               r.nrm_u_l2, r.nrm_q_l1, r.nrm_q_l2, r.nrm_q_linf, r.nrm_gradq_l2,
               r.e_low, r.e_high, r.shell_r, r.box_contaminated ? 1 : 0);
}

}  // namespace qbe
