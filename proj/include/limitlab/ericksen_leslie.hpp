#pragma once

#include "limitlab/coefficient_bridge.hpp"
#include "limitlab/imex.hpp"
#include "limitlab/spectral_fields.hpp"

namespace limitlab {

struct ElState {
  VectorField n;
  VectorField ndot;  // material derivative of n
  VectorField v;
  double t = 0.0;

  ElState() = default;
  explicit ElState(const PeriodicGrid& g) : n(g), ndot(g), v(g) {}

  ElState& axpy(double s, const ElState& o) {
    n.axpy(s, o.n);
    ndot.axpy(s, o.ndot);
    v.axpy(s, o.v);
    return *this;
  }
};

struct ElTendency {
  VectorField dn;
  VectorField dndot;
  VectorField dv;
  VectorField nddot;  // material second derivative from the multiplier solve (zero when I = 0)
};

struct ElConfig {
  LeslieParams leslie;
  double dt = 1e-3;
  double t_end = 1.0;
  double imex_theta = 0.5;
  int snapshot_every = 0;
  double cfl_limit = 1.0;
};

struct ElEnergy {
  double kinetic = 0.0;
  double inertial = 0.0;
  double frank = 0.0;
  double total = 0.0;
};

// Pointwise Oseen-Frank density and its partial derivatives. grad(i,k) = d_i n_k,
// flux(i,k) = dE/d(d_i n_k).
struct FrankLocal {
  double energy = 0.0;
  Vec3 dn;
  Mat3 flux;
};
FrankLocal frank_local(const Vec3& n, const Mat3& grad, const LeslieParams& lp);

double frank_energy(const VectorField& n, const LeslieParams& lp, DiffContext& ctx);
// h = -dE/dn + d_i flux_ik. With check = true, |n| = 1 is enforced (NonUnitField).
VectorField frank_molecular_field(const VectorField& n, const LeslieParams& lp, DiffContext& ctx, bool check = true);
// Entry (j,i) holds -flux_jk d_i n_k, the same index layout as the distortion stress.
Mat3Field ericksen_stress(const VectorField& n, const LeslieParams& lp, DiffContext& ctx);
// Leslie viscous stress in the flux convention (row = derivative slot). In this
// convention the alpha2/alpha3 and alpha5/alpha6 terms carry nN, Nn and nn.D, D.nn
// in transposed positions relative to the usual textbook layout.
Mat3 leslie_stress(const Vec3& n, const Vec3& N, const Mat3& d, const LeslieParams& lp);

ElState el_equilibrium(const PeriodicGrid& g, const Vec3& n);
ElTendency el_rhs(const ElState& s, const LeslieParams& lp, DiffContext& ctx);
ElState el_step(const ElState& s, const ElConfig& cfg, DiffContext& ctx, StepReport* report = nullptr);
ElEnergy el_energy(const ElState& s, const LeslieParams& lp, DiffContext& ctx);
double el_dissipation_rate(const ElState& s, const LeslieParams& lp, DiffContext& ctx);
double el_energy_residual(const ElState& s0, const ElState& s1, const LeslieParams& lp, DiffContext& ctx,
                          double* rate_mid = nullptr);

}  // namespace limitlab
