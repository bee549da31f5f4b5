#pragma once

// Bulk potentials F(Q) on symmetric traceless tensors and numerical
// verification of the structural hypotheses the decay estimates rest on:
//   (positivity)   F(0) = 0 and F > 0 away from 0 on the working region,
//   (growth)       dF(Q):Q >= 0 inside a ball B_r1 and outside a ball B_r2,
//   (coercivity)   optionally F(Q) >= lambda |Q|^2 inside B_r1,
//   (domination)   F(Q) <= alpha |Q|^2 inside B_r2.
//
// The sampler walks the two-parameter eigenvalue domain: every symmetric
// traceless Q is orthogonally conjugate to diag(d1,d2,-d1-d2) and the
// interface assumes F depends on Q only through its eigenvalues (true for
// anything built from |Q|^2, tr Q^3, |Q|^4, ...).

#include <optional>
#include <string>

#include "qbe/tensor.hpp"

namespace qbe {

class Potential {
 public:
  virtual ~Potential() = default;

  virtual double value(const SymTraceless3& q) const = 0;

  // Full gradient dF/dQ over symmetric matrices: d/dt F(Q + tM) = dF:M.
  virtual Mat3 gradient(const SymTraceless3& q) const = 0;

  // Traceless part of the gradient; this is what enters the dynamics.
  virtual SymTraceless3 projected_gradient(const SymTraceless3& q) const {
    return SymTraceless3::from_mat(gradient(q));
  }

  // d^2/dt^2 F(t U)|_{t=0} along a unit traceless direction; used by the
  // linearized dynamics. Default: centered finite difference along B0.
  virtual double curvature_at_zero() const;
};

// F(Q) = a/2 |Q|^2 + b/3 tr Q^3 + c/4 |Q|^4
class PolynomialPotential final : public Potential {
 public:
  PolynomialPotential(double a, double b, double c) : a_(a), b_(b), c_(c) {}

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  double value(const SymTraceless3& q) const override;
  Mat3 gradient(const SymTraceless3& q) const override;           // aQ + bQ^2 + c|Q|^2 Q
  SymTraceless3 projected_gradient(const SymTraceless3& q) const override;
  double curvature_at_zero() const override { return a_; }

 private:
  double a_, b_, c_;
};

struct HypothesesSampling {
  double r_max = 1.0;   // inner search radius; exterior sampled on (r_max, 2 r_max]
  int n_radial = 96;    // radii per unit of r_max
  int n_angular = 180;  // samples around each eigenvalue circle
};

struct PotentialHypothesesReport {
  double r1 = 0.0;  // dF:Q >= 0 (and F > 0) hold on all samples with |Q| <= r1
  double r2 = 0.0;  // dF:Q >= 0 holds on all samples with |Q| >= r2 (up to 2 r_max)
  bool positivity_ok = false;  // F > 0 on all nonzero samples
  bool growth_ok = false;      // both the inner and the exterior growth regions exist
  std::optional<double> lambda;  // inf F/|Q|^2 over B_r1 samples, if positive
  double alpha = 0.0;            // sup F/|Q|^2 over B_r2 samples
  long samples = 0;
  std::optional<SymTraceless3> witness;  // a sample violating a hypothesis, if any
};

PotentialHypothesesReport verify_hypotheses(const Potential& pot,
                                            const HypothesesSampling& s = {});

std::string describe(const PotentialHypothesesReport& rep);

}  // namespace qbe
