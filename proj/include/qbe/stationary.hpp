#pragma once

// Stationary states of the order-tensor equation via gradient flow
// (the u = 0 reduction of the evolution), plus the Pohozaev-type
// integral identities certifying that the isotropic state Q = 0 is the
// only stationary point when F >= 0.  The identities are stated on the
// whole space; they transfer to the box for fields that decay well
// inside it, which is how they are used here.

#include <vector>

#include "qbe/dynamics.hpp"

namespace qbe {

struct FlowConfig {
  double dt = 0.1;
  long max_iters = 20000;
  double tol_rel = 1e-8;  // stop at residual <= tol_rel * max(1, ||q0||_2)
};

struct StationaryReport {
  double stationary_residual = 0.0;  // || Lap Q - L[dF(Q)] ||_2 at the final iterate
  double pohozaev = 0.0;             // int (1/2 |grad Q|^2 + 3 F(Q))
  double pohozaev_combo = 0.0;       // polynomial potentials; NaN otherwise
  double final_sup = 0.0;            // ||Q||_inf at the final iterate
  long iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // one entry per iteration
};

// integrating-factor Heun flow  dQ/dtau = Lap Q - L[dF(Q)]  from q0 until
// the residual drops under tolerance or the iteration budget runs out
std::pair<QField, StationaryReport> gradient_flow(const QField& q0, const Potential& pot,
                                                  const FlowConfig& fc = {});

// int (1/2 |grad Q|^2 + 3 F(Q)); zero for decaying stationary solutions
double pohozaev_residual(QField& q, const Potential& pot);

// int (-1/2 |grad Q|^2 + a/2 |Q|^2 - c/4 |Q|^4): the cubic term drops out
// of the combination of the Pohozaev identity with the equation tested by
// Q itself, so this vanishes for stationary states of any (a, b, c)
double pohozaev_combination(QField& q, const PolynomialPotential& pot);

}  // namespace qbe
