#pragma once

#include "limitlab/coefficient_bridge.hpp"
#include "limitlab/imex.hpp"
#include "limitlab/landau_de_gennes.hpp"
#include "limitlab/spectral_fields.hpp"

namespace limitlab {

struct QsState {
  TensorField q;
  TensorField qdot;  // material derivative of q
  VectorField v;
  double t = 0.0;

  QsState() = default;
  explicit QsState(const PeriodicGrid& g) : q(g), qdot(g), v(g) {}

  QsState& axpy(double s, const QsState& o) {
    q.axpy(s, o.q);
    qdot.axpy(s, o.qdot);
    v.axpy(s, o.v);
    return *this;
  }
};

// Tendencies share the state layout; t is unused.
using QsTendency = QsState;

struct QsConfig {
  MaterialParams material;
  double dt = 1e-3;
  double t_end = 1.0;
  double imex_theta = 0.5;
  int snapshot_every = 0;
  double stiffness_safety = 1.0;
  double cfl_limit = 1.0;
  Certificate certificate;
};

struct QsEnergy {
  double kinetic = 0.0;
  double inertial = 0.0;
  double free_energy = 0.0;
  double total = 0.0;
};

// Uniform uniaxial state s1 (nn - I/3) at rest.
QsState qs_equilibrium(const PeriodicGrid& g, const Director& n, const BulkParams& bp);

// Viscous stress sigma_eps in the flux convention (row = derivative slot).
Mat3 qs_viscous_stress(const Mat3& q, const Mat3& qdot, const Mat3& d, const Mat3& omega, const ViscosityParams& vp);

QsTendency qs_rhs(const QsState& s, const MaterialParams& p, DiffContext& ctx);
QsState qs_step(const QsState& s, const QsConfig& cfg, DiffContext& ctx, StepReport* report = nullptr);
QsEnergy qs_energy(const QsState& s, const MaterialParams& p, DiffContext& ctx);
// Right-hand side of the energy law evaluated at one state.
double qs_dissipation_rate(const QsState& s, const MaterialParams& p, DiffContext& ctx);
// |(E(s1) - E(s0))/dt - R((s0 + s1)/2)|; `rate_mid` receives R.
double qs_dissipation_residual(const QsState& s0, const QsState& s1, const MaterialParams& p, DiffContext& ctx,
                               double* rate_mid = nullptr);
// The stiffness bound dt <= safety * sqrt(J / rate) for the explicit remainder.
double qs_stiffness_dt_bound(const QsState& s, const MaterialParams& p, double safety);

}  // namespace limitlab
