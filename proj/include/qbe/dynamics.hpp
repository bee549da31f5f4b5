#pragma once

// Coupled evolution of the order tensor Q and the velocity u on the
// periodic box (unit viscosity and unit order-parameter diffusion):
//
//   dQ/dt + div(Q u) = S(grad u, Q) + Lap Q - L[dF(Q)]
//   du/dt + P div(u ⊗ u) = Lap u + P div Sigma(Q),   div u = 0
//
// with P the Leray projection (no explicit pressure).  Gradient
// convention: (grad u)_ij = d_i u_j; vorticity w = (grad u - grad^t u)/2;
// this pairing of S and Sigma is the one that closes the energy balance.
//
// Time integration is an integrating-factor Heun scheme: the diffusion
// semigroup exp(-|xi|^2 dt) is applied exactly mode by mode and the
// remaining terms are advanced with a two-stage explicit rule (global
// order 2).  Every nonlinear product is formed in real space from
// dealiased factors and dealiased again after transforming.

#include <stdexcept>
#include <utility>

#include "qbe/field.hpp"
#include "qbe/gridops.hpp"
#include "qbe/potential.hpp"

namespace qbe {

struct ModelParams {
  double xi = 0.0;
  const Potential* potential = nullptr;
  // drop advection, S, Sigma and u⊗u, and replace L[dF(Q)] by its
  // linearization curvature_at_zero() * Q
  bool linearized = false;
};

struct State {
  double t = 0.0;
  VecField u;
  QField q;

  explicit State(const PeriodicGrid& g) : u(g), q(g) {}
  State(double t0, VecField u0, QField q0) : t(t0), u(std::move(u0)), q(std::move(q0)) {}
};

struct CflViolation : std::runtime_error {
  CflViolation(double requested, double advisory)
      : std::runtime_error("time step rejected by the advection bound"),
        requested_dt(requested), advisory_dt(advisory) {}
  double requested_dt, advisory_dt;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// H = Lap Q - L[dF(Q)]; returned with valid real samples
QField molecular_field(QField& q, const Potential& pot);

// component 3i+j holds d_i u_j, with valid real samples
Mat3Field velocity_gradient(VecField& u);

// source tensor of the Q equation, symmetrized and trace-projected;
// grad_u component 3i+j holds d_i u_j
QField tensor_S(Mat3Field& grad_u, QField& q, double xi);

// distortion stress. h is the molecular field; at xi = 0 only the
// commutator touches h, so passing Lap Q instead yields the equivalent
// Laplacian-only form (the two agree for isotropic potentials).
Mat3Field tensor_Sigma(QField& q, QField& h, double xi);

// full right-hand sides (including the diffusion terms), dealiased;
// u_rhs is Leray-projected and carries no pressure gradient
QField q_rhs(State& st, const ModelParams& mp);
VecField u_rhs(State& st, const ModelParams& mp);

struct StepControl {
  double cfl_safety = 0.5;  // accept dt <= cfl_safety * dx / max|u|
};

// one integrating-factor Heun step; re-projects u, advances st.t by dt.
// Throws CflViolation (state untouched) or NumericalFailure (state
// contains the offending data) on failure.
void step(State& st, const ModelParams& mp, double dt, const StepControl& sc = {});

// max pointwise |u| (the advection speed the step bound uses)
double max_speed(VecField& u);

}  // namespace qbe
