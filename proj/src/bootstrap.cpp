#include "qbe/bootstrap.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_odeiv2.h>
#include <gsl/gsl_sf_erf.h>

namespace qbe {

namespace {

// report quadrature/ODE trouble through return codes, not the default abort
const struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
} gsl_quiet_init;

struct OdeParams {
  double gamma, mu, c, scale;
};

// The scale factor multiplies the source term only.  A scale < 1 then
// yields a strict sub-solution of the unscaled equation (the damping term
// is untouched), so the comparison principle applies pointwise; scaling
// the damping as well would produce a super-solution wherever the
// right-hand side is negative, which it is along the equality trajectory.
int decay_rhs(double t, const double y[], double dydt[], void* params) {
  const auto* p = static_cast<const OdeParams*>(params);
  dydt[0] = -std::pow(1.0 + t, -p->gamma) * y[0] +
            p->scale * p->c * std::pow(1.0 + t, -p->mu);
  return GSL_SUCCESS;
}

struct QuadWorkspace {
  gsl_integration_workspace* w;
  QuadWorkspace() : w(gsl_integration_workspace_alloc(4096)) {}
  ~QuadWorkspace() { gsl_integration_workspace_free(w); }
};

double quad_finite(double (*f)(double, void*), void* params, double lo, double hi,
                   double eps_rel) {
  if (hi <= lo) return 0.0;
  QuadWorkspace qw;
  double result = 0.0, abserr = 0.0;
  gsl_function gf{f, params};
  const int status = gsl_integration_qag(&gf, lo, hi, 0.0, eps_rel, 4096,
                                         GSL_INTEG_GAUSS61, qw.w, &result, &abserr);
  if (status != GSL_SUCCESS)
    throw std::runtime_error("bootstrap quadrature failed to converge");
  return result;
}

// geometric sample times 0 = t_0 < ... < t_N = horizon
std::vector<double> geometric_times(double horizon, int per_decade) {
  std::vector<double> ts{0.0};
  const double decades = std::log10(1.0 + horizon);
  const int n = std::max(2, int(std::ceil(decades * per_decade)));
  for (int j = 1; j <= n; ++j)
    ts.push_back(std::pow(1.0 + horizon, double(j) / n) - 1.0);
  ts.back() = horizon;
  return ts;
}

struct SupResult {
  double sup_all;
  double sup_early;  // over [0, horizon/10]
};

SupResult weighted_sup_impl(double gamma, double mu, double c, double e0,
                            double horizon, double source_scale) {
  OdeParams op{gamma, mu, c, source_scale};
  gsl_odeiv2_system sys{decay_rhs, nullptr, 1, &op};
  std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> drv(
      gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-6, 1e-14, 1e-12),
      gsl_odeiv2_driver_free);

  const std::vector<double> ts = geometric_times(horizon, 256);
  double t = 0.0, y = e0;
  SupResult r{e0 * 1.0, e0 * 1.0};  // weight (1+0)^{mu-gamma} = 1 at t = 0
  for (double target : ts) {
    if (target <= t) continue;
    if (gsl_odeiv2_driver_apply(drv.get(), &t, target, &y) != GSL_SUCCESS)
      throw std::runtime_error("decay ODE integration failed");
    const double w = y * std::pow(1.0 + t, mu - gamma);
    if (w > r.sup_all) r.sup_all = w;
    if (t <= horizon / 10.0 && w > r.sup_early) r.sup_early = w;
  }
  return r;
}

}  // namespace

DecayLemmaReport weighted_decay_sup(const BootstrapParams& p) {
  if (!(p.gamma > 0.0 && p.gamma < 1.0))
    throw std::invalid_argument("weighted_decay_sup: gamma must lie in (0,1)");
  if (!(p.mu > p.gamma))
    throw std::invalid_argument("weighted_decay_sup: mu must exceed gamma");
  if (!(p.c >= 0.0 && p.e0 >= 0.0))
    throw std::invalid_argument("weighted_decay_sup: c and e0 must be >= 0");
  if (!(p.horizon > 0.0))
    throw std::invalid_argument("weighted_decay_sup: horizon must be positive");
  const SupResult r = weighted_sup_impl(p.gamma, p.mu, p.c, p.e0, p.horizon, 1.0);
  DecayLemmaReport rep;
  rep.weighted_sup = r.sup_all;
  rep.drift_last_decade = r.sup_all > 0.0 ? (r.sup_all - r.sup_early) / r.sup_all : 0.0;
  return rep;
}

std::vector<std::pair<double, double>> decay_ode_trajectory(const BootstrapParams& p,
                                                            int samples_per_decade,
                                                            double source_scale) {
  if (!(p.gamma >= 0.0 && p.gamma < 1.0))
    throw std::invalid_argument("decay_ode_trajectory: gamma must lie in [0,1)");
  OdeParams op{p.gamma, p.mu, p.c, source_scale};
  gsl_odeiv2_system sys{decay_rhs, nullptr, 1, &op};
  std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> drv(
      gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-6, 1e-14, 1e-12),
      gsl_odeiv2_driver_free);

  std::vector<std::pair<double, double>> out{{0.0, p.e0}};
  double t = 0.0, y = p.e0;
  for (double target : geometric_times(p.horizon, samples_per_decade)) {
    if (target <= t) continue;
    if (gsl_odeiv2_driver_apply(drv.get(), &t, target, &y) != GSL_SUCCESS)
      throw std::runtime_error("decay ODE integration failed");
    out.emplace_back(t, y);
  }
  return out;
}

namespace {

struct KernelParams {
  double alpha, r2, x;  // x = r^2 t
};

// substituted integrand: the kernel equals int_0^x e^{-w} (r^2 + x - w)^{-alpha} dw
// after w = x - z, so the exponential never overflows
double kernel_integrand(double w, void* params) {
  const auto* p = static_cast<const KernelParams*>(params);
  return std::exp(-w) * std::pow(p->r2 + p->x - w, -p->alpha);
}

double kernel_value(double alpha, double r, double t) {
  const double r2 = r * r;
  const double x = r2 * t;
  if (x == 0.0) return 0.0;
  KernelParams kp{alpha, r2, x};
  const double inner = quad_finite(kernel_integrand, &kp, 0.0, x, 1e-10);
  return std::pow(r2, alpha) * inner;
}

}  // namespace

KernelBoundReport kernel_bound_scan(double alpha, std::span<const double> r_grid,
                                    std::span<const double> t_grid) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("kernel_bound_scan: alpha must be >= 0");
  if (alpha == 1.0)
    throw std::invalid_argument(
        "kernel_bound_scan: the envelope changes form at alpha = 1; scan a "
        "neighborhood instead");
  KernelBoundReport rep;
  rep.alpha = alpha;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("kernel_bound_scan: radii must be positive");
    for (double t : t_grid) {
      const double k = kernel_value(alpha, r, t);
      const double ratio = alpha > 0.0 ? k / (r * r) : k;
      if (!(ratio >= 0.0) || !std::isfinite(ratio))
        throw std::runtime_error("kernel_bound_scan: non-finite ratio");
      if (ratio > rep.max_ratio) rep.max_ratio = ratio;
    }
  }
  rep.fitted_c = rep.max_ratio;
  return rep;
}

double kernel_small_r_limit(double alpha, double t) {
  if (alpha == 1.0) return std::log1p(t);
  return (std::pow(1.0 + t, 1.0 - alpha) - 1.0) / (1.0 - alpha);
}

double low_freq_heat_mass(double R, double t) {
  if (!(R >= 0.0)) throw std::invalid_argument("low_freq_heat_mass: R must be >= 0");
  if (R == 0.0) return 0.0;
  const double k = 2.0 * (t + 1.0);
  const double sk = std::sqrt(k);
  // int_0^R e^{-k rho^2} rho^2 d rho = sqrt(pi) erf(sqrt(k) R) / (4 k^{3/2})
  //                                    - R e^{-k R^2} / (2k)
  const double pi = 3.14159265358979323846;
  const double radial = std::sqrt(pi) * gsl_sf_erf(sk * R) / (4.0 * k * sk) -
                        R * std::exp(-k * R * R) / (2.0 * k);
  return 4.0 * pi * radial;
}

namespace {

double heat_mass_integrand(double rho, void* params) {
  const double k = *static_cast<const double*>(params);
  return std::exp(-k * rho * rho) * rho * rho;
}

double envelope_integrand(double r, void* /*params*/) {
  return std::exp(-2.0 * std::pow(r, 2.0 / 3.0));
}

}  // namespace

double low_freq_heat_mass_quad(double R, double t) {
  if (!(R >= 0.0)) throw std::invalid_argument("low_freq_heat_mass_quad: R must be >= 0");
  double k = 2.0 * (t + 1.0);
  const double pi = 3.14159265358979323846;
  return 4.0 * pi * quad_finite(heat_mass_integrand, &k, 0.0, R, 1e-13);
}

double low_freq_envelope_constant() {
  static const double c0 = [] {
    QuadWorkspace qw;
    double result = 0.0, abserr = 0.0;
    gsl_function gf{envelope_integrand, nullptr};
    if (gsl_integration_qagiu(&gf, 0.0, 0.0, 1e-12, 4096, qw.w, &result, &abserr) !=
        GSL_SUCCESS)
      throw std::runtime_error("envelope constant quadrature failed");
    const double pi = 3.14159265358979323846;
    return 4.0 * pi / 3.0 * result;
  }();
  return c0;
}

double shell_schedule(double t, double beta) {
  if (!(beta >= 0.0 && beta <= 0.5))
    throw std::invalid_argument("shell_schedule: beta must lie in [0, 1/2]");
  if (!(t >= 0.0)) throw std::invalid_argument("shell_schedule: t must be >= 0");
  return std::min(1.0, std::pow(1.0 + t, -beta));
}

namespace {

struct TailParams {
  double t;
};

// w = t - s turns int_1^t e^{-(t-s)} s^{-3/2} ds into
// int_0^{t-1} e^{-w} (t-w)^{-3/2} dw
double tail_integrand(double w, void* params) {
  const auto* p = static_cast<const TailParams*>(params);
  return std::exp(-w) * std::pow(p->t - w, -1.5);
}

}  // namespace

double duhamel_tail_integral(double t) {
  if (!(t > 1.0)) throw std::invalid_argument("duhamel_tail_integral: need t > 1");
  TailParams tp{t};
  return quad_finite(tail_integrand, &tp, 0.0, t - 1.0, 1e-12);
}

double duhamel_tail_ratio(double t) {
  return duhamel_tail_integral(t) * std::pow(0.5 * t, 1.5);
}

std::vector<CascadePass> bootstrap_cascade(double c_const, double e0, double epsilon,
                                           double horizon) {
  if (!(epsilon > 0.0 && epsilon < 0.75))
    throw std::invalid_argument("bootstrap_cascade: epsilon must lie in (0, 3/4)");
  std::vector<CascadePass> passes;

  // flat energy in, damping shell 2*beta = 1 - 2 eps/3, forcing 3/2 - eps
  {
    CascadePass p;
    p.index = 1;
    p.gamma = 1.0 - 2.0 * epsilon / 3.0;
    p.beta = 0.5 * p.gamma;
    p.mu = 1.5 - epsilon;
    p.exponent = p.mu - p.gamma;  // = 1/2 - eps/3
    BootstrapParams bp;
    bp.gamma = p.gamma;
    bp.mu = p.mu;
    bp.c = c_const;
    bp.e0 = e0;
    bp.horizon = horizon;
    const DecayLemmaReport rep = weighted_decay_sup(bp);
    p.weighted_sup = rep.weighted_sup;
    p.drift_last_decade = rep.drift_last_decade;
    passes.push_back(p);
  }

  // previous exponent in, shell 2*beta = 3/7, forcing back at 3/2
  {
    CascadePass p;
    p.index = 2;
    p.gamma = 3.0 / 7.0;
    p.beta = 0.5 * p.gamma;
    p.mu = 1.5;
    p.exponent = p.mu - p.gamma;  // = 15/14
    BootstrapParams bp;
    bp.gamma = p.gamma;
    bp.mu = p.mu;
    bp.c = c_const;
    bp.e0 = e0;
    bp.horizon = horizon;
    const DecayLemmaReport rep = weighted_decay_sup(bp);
    p.weighted_sup = rep.weighted_sup;
    p.drift_last_decade = rep.drift_last_decade;
    passes.push_back(p);
  }

  // final stage: constant shell R = 1, exponential damping, forcing 3/2
  {
    CascadePass p;
    p.index = 3;
    p.beta = 0.0;
    p.gamma = 0.0;
    p.mu = 1.5;
    p.exponent = 1.5;
    const SupResult r = weighted_sup_impl(0.0, p.mu, c_const, e0, horizon, 1.0);
    p.weighted_sup = r.sup_all;
    p.drift_last_decade = r.sup_all > 0.0 ? (r.sup_all - r.sup_early) / r.sup_all : 0.0;
    passes.push_back(p);
  }
  return passes;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > lo && n >= 2))
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  g.back() = hi;
  return g;
}

}  // namespace qbe
