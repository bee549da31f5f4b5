#pragma once

// Scalar functionals of the state (energies, norms, dissipation rates),
// renormalized balances for G(|Q|^2), and least-squares decay fits.
//
// The contaminated flag marks records past the time where the finite box
// starts to dominate whole-space decay emulation (the slowest surviving
// mode turns power laws into exponentials); fits skip those records.

#include <cstdio>
#include <functional>
#include <span>
#include <vector>

#include "qbe/dynamics.hpp"

namespace qbe {

struct EnergyReport {
  double t = 0.0;
  double e_kinetic = 0.0;    // 1/2 int |u|^2
  double e_dirichlet = 0.0;  // 1/2 int |grad Q|^2
  double e_bulk = 0.0;       // int F(Q)
  double e_total = 0.0;      // sum of the three above, by construction
  double d_u = 0.0;          // int |grad u|^2
  double d_q = 0.0;          // int |Lap Q - L[dF(Q)]|^2
  double nrm_u_l2 = 0.0;
  double nrm_q_l1 = 0.0;
  double nrm_q_l2 = 0.0;
  double nrm_q_linf = 0.0;
  double nrm_gradq_l2 = 0.0;
  double e_low = 0.0;   // ||u||^2 mass in |xi| < shell_r
  double e_high = 0.0;  // remainder; e_low + e_high = 2 e_kinetic
  double shell_r = 0.0;
  bool box_contaminated = false;
};

// shell_r = min(1, (1+t)^-beta); records with t > contamination_time are
// flagged. All integrals use the spectral quadrature of gridops.hpp.
EnergyReport energy_report(State& st, const ModelParams& mp, double beta,
                           double contamination_time);

// E(t_idx) + trapezoid of (d_u + d_q) over [s_idx, t_idx] - E(s_idx);
// zero for exact solutions of the coupled system, O(dt^2) for the scheme.
double energy_balance_residual(std::span<const EnergyReport> reps,
                               std::size_t s_idx, std::size_t t_idx);

// renormalizing functions G for the |Q|^2 balance:
//   power:           G(z) = (z + delta^2)^(p/2) - delta^p  (delta = 0 allowed
//                    only for p >= 2, where G is already C^2)
//   clipped_quartic: G(z) = [(z - r^2/4)_+]^2
struct GSpec {
  enum class Kind { power, clipped_quartic } kind = Kind::power;
  double p = 2.0;      // power kind
  double delta = 0.0;  // smoothing floor for p < 2
  double r = 0.0;      // clipped_quartic kind

  static GSpec power(double p, double delta = 0.0);  // throws if p<2, delta=0
  static GSpec clipped_quartic(double r);

  double g(double z) const;
  double gp(double z) const;   // G'
  double gpp(double z) const;  // G''
};

// one balance sample: Phi = int G(|Q|^2) and the drift
// D = int [2G'|grad Q|^2 + G''|grad|Q|^2|^2 + 2G' dF:Q]
struct RenormRecord {
  double t = 0.0;
  double phi = 0.0;
  double drift = 0.0;
};

RenormRecord renorm_record(State& st, const Potential& pot, const GSpec& gs);

// per-interval residuals (phi_{k+1}-phi_k)/dt + midpoint drift; exact
// evolution makes these vanish independently of u
std::vector<double> renorm_residuals(std::span<const RenormRecord> recs);

// instantaneous contribution of the velocity terms (advection and the
// rotation source) to d/dt int G(|Q|^2); vanishes identically for
// G(z) = z at xi = 0 (discrete skew-symmetry plus the rotation identity)
double renorm_velocity_channel(State& st, const ModelParams& mp, const GSpec& gs);

// max over records of ||Q||_inf - r2 (positive means the bound failed)
double max_principle_excess(std::span<const EnergyReport> reps, double r2);

struct DecayFit {
  double t_lo = 0.0, t_hi = 0.0;
  double exponent = 0.0;   // power: slope in log(1+t); exponential: rate d
  double amplitude = 0.0;  // value at t=0 of the fitted law
  double goodness = 0.0;   // r^2 of the straightened least squares
  int samples = 0;
};

// least squares of log(value) against log(1+t) (power) or t (exponential,
// value ~ amplitude*exp(-d t)). Uses only uncontaminated records with
// value > 0 inside [t_lo, t_hi]; throws std::invalid_argument when fewer
// than 10 remain.
DecayFit fit_power_decay(std::span<const EnergyReport> reps,
                         const std::function<double(const EnergyReport&)>& value,
                         double t_lo, double t_hi);
DecayFit fit_exponential_decay(std::span<const EnergyReport> reps,
                               const std::function<double(const EnergyReport&)>& value,
                               double t_lo, double t_hi);

// (||Q||_2, ||Q||_1^{2/5} ||Q||_6^{3/5}); Hoelder makes lhs <= rhs exactly
std::pair<double, double> interpolation_check(QField& q);

// ||grad v||_{L4}^2 / (||Lap v||_{L2} ||v||_inf) for a scalar sample; the
// empirical constant of this inequality is resolution-stable, which is the
// only property asserted about it
double gn_l4_ratio(ScalarField& v);

// CSV emission; floats carry 17 significant digits so doubles round-trip
extern const char* const kCsvHeader;
void write_csv_header(std::FILE* f);
void write_csv_row(std::FILE* f, const EnergyReport& r);

}  // namespace qbe
