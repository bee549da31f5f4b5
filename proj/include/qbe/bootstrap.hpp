#pragma once

// Scalar-level verification of the Fourier-splitting decay machinery:
// the weighted-decay comparison lemma (an ODE in time), the Duhamel
// kernel envelope in the (r, t) plane, low-frequency Gaussian mass, and
// the exponent cascade that upgrades a bounded energy to the limiting
// (1+t)^{-3/2} rate.  Everything here is plain scalar numerics (GSL ODE
// integration and adaptive quadrature); nothing touches grid fields.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qbe {

struct BootstrapParams {
  double gamma = 0.5;  // damping exponent, must lie in (0,1)
  double mu = 1.5;     // forcing exponent, must exceed gamma
  double c = 1.0;      // forcing constant, >= 0
  double e0 = 1.0;     // initial energy, >= 0
  double horizon = 1e4;
  double epsilon = 0.1;  // slack in the shell exponent beta = 1/2 - eps/3
  double alpha = 0.0;    // assumed decay exponent inside the kernel scan
};

// E' = -(1+t)^{-gamma} E + c (1+t)^{-mu}, the equality case dominating
// every sub-solution of the differential inequality.
struct DecayLemmaReport {
  double weighted_sup = 0.0;       // sup_t E(t) (1+t)^{mu-gamma}
  double drift_last_decade = 0.0;  // relative growth of the sup over [T/10, T]
};

// throws std::invalid_argument unless gamma in (0,1), mu > gamma,
// c >= 0, e0 >= 0, horizon > 0
DecayLemmaReport weighted_decay_sup(const BootstrapParams& p);

// (t, E(t)) samples on a geometric time grid; source_scale multiplies the
// source term only, leaving the damping untouched, so scale < 1 yields a
// strict sub-solution (used to spot-check the comparison principle).
// gamma = 0 is allowed here — the cascade's final stage has constant
// damping.
std::vector<std::pair<double, double>> decay_ode_trajectory(
    const BootstrapParams& p, int samples_per_decade = 64, double source_scale = 1.0);

// K(r,t) = r^{2 alpha} e^{-r^2 t} int_0^{r^2 t} e^z (r^2+z)^{-alpha} dz,
// compared against the envelope 1 (alpha = 0) or c(alpha) r^2 (alpha > 0).
struct KernelBoundReport {
  double alpha = 0.0;
  double max_ratio = 0.0;  // max over the grid of K / (alpha ? r^2 : 1)
  double fitted_c = 0.0;   // = max_ratio when alpha > 0
};

// alpha >= 0 and alpha != 1 (the envelope changes form at 1; a
// neighborhood of 1 may be scanned, the point itself is rejected)
KernelBoundReport kernel_bound_scan(double alpha, std::span<const double> r_grid,
                                    std::span<const double> t_grid);

// K / r^2 in the r -> 0 limit: [(1+t)^{1-alpha} - 1] / (1-alpha)
double kernel_small_r_limit(double alpha, double t);

// 4 pi int_0^R exp(-2 rho^2 (t+1)) rho^2 d rho, closed form (erf) and an
// adaptive-quadrature cross-check; bounded by C0 (t+1)^{-3/2} with
// C0 = (4 pi / 3) int_0^inf exp(-2 r^{2/3}) dr
double low_freq_heat_mass(double R, double t);
double low_freq_heat_mass_quad(double R, double t);
double low_freq_envelope_constant();

// frequency-splitting radius min(1, (1+t)^{-beta}); beta in [0, 1/2]
double shell_schedule(double t, double beta);

// I(t) = int_1^t e^{-(t-s)} s^{-3/2} ds, and the ratio I(t) (t/2)^{3/2}
// whose sup over t >= 4 is the fitted constant of the tail inequality
double duhamel_tail_integral(double t);
double duhamel_tail_ratio(double t);

// one stage of the exponent cascade, verified by integrating the
// majorant ODE and checking weighted boundedness at the claimed exponent
struct CascadePass {
  int index = 0;
  double beta = 0.0;      // shell exponent used by the pass
  double gamma = 0.0;     // = 2 beta, damping exponent of the majorant
  double mu = 0.0;        // forcing exponent fed into the pass
  double exponent = 0.0;  // certified decay exponent (= mu - gamma)
  double weighted_sup = 0.0;
  double drift_last_decade = 0.0;
};

// replays the three passes: (2beta = 1 - 2eps/3) -> 1/2 - eps/3,
// (2beta = 3/7) -> 15/14, and the constant-damping stage -> 3/2
std::vector<CascadePass> bootstrap_cascade(double c_const, double e0,
                                           double epsilon = 0.1,
                                           double horizon = 1e4);

// log-spaced grid helper for the scans
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace qbe
