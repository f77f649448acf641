#include "limitlab/qian_sheng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace limitlab {

namespace {

void require_inertia(const MaterialParams& p) {
  if (!(p.viscosity.J > 0.0)) throw Error(ErrorCode::InvalidArgument, "the Q-tensor solver needs J > 0");
  if (!(p.eps > 0.0)) throw Error(ErrorCode::BadEpsilon, "eps must be positive");
}

// Stabilizing spring: the largest eigenvalue of H_n bounds the stiff bulk response near
// the uniaxial manifold, and is treated implicitly together with L1 Delta.
double stabilization(const BulkParams& bp) { return bp.c > 0.0 ? hn_max_eigenvalue(bp) : 0.0; }

SpectralLinearOps make_ops(const MaterialParams& p, DiffContext& ctx) {
  const double kappa = stabilization(p.bulk) / p.eps;
  const double J = p.viscosity.J;
  const double L1 = p.elastic.L1;
  const double damping = p.viscosity.mu1 / J;
  return SpectralLinearOps(
      ctx, [=](double k2) { return OscillatorBlock{(kappa + L1 * k2) / J, damping}; }, p.viscosity.beta4 / 2.0);
}

QsState apply_linear(const QsState& x, SpectralLinearOps& ops) {
  QsState r(x.q.grid());
  for (int c = 0; c < 5; ++c) ops.apply_pair(x.q.component(c), x.qdot.component(c), r.q.component(c), r.qdot.component(c));
  for (int c = 0; c < 3; ++c) ops.apply_diffusion(x.v.component(c), r.v.component(c));
  return r;
}

QsState solve_linear(const QsState& rhs, double tau, SpectralLinearOps& ops) {
  QsState r(rhs.q.grid());
  r.t = rhs.t;
  for (int c = 0; c < 5; ++c)
    ops.solve_pair(rhs.q.component(c), rhs.qdot.component(c), tau, r.q.component(c), r.qdot.component(c));
  for (int c = 0; c < 3; ++c) ops.solve_diffusion(rhs.v.component(c), tau, r.v.component(c));
  return r;
}

template <int C>
bool all_finite(const Field<C>& f) {
  for (double x : f.data())
    if (!std::isfinite(x)) return false;
  return true;
}

struct QsSystem {
  const MaterialParams& p;
  DiffContext& ctx;
  SpectralLinearOps ops;

  QsState rhs(const QsState& x) { return qs_rhs(x, p, ctx); }
  QsState apply_linear(const QsState& x) { return limitlab::apply_linear(x, ops); }
  QsState solve_linear(const QsState& r, double tau) { return limitlab::solve_linear(r, tau, ops); }
};

}  // namespace

QsState qs_equilibrium(const PeriodicGrid& g, const Director& n, const BulkParams& bp) {
  QsState s(g);
  const QTensor q0 = uniaxial(n, critical_s1(bp));
  for (int p = 0; p < g.size(); ++p) set_tensor(s.q, p, q0);
  return s;
}

Mat3 qs_viscous_stress(const Mat3& q, const Mat3& qdot, const Mat3& d, const Mat3& omega, const ViscosityParams& vp) {
  const Mat3 n = qdot - commutator(omega, q);
  const Mat3 dq = d * q;
  const Mat3 qd = q * d;
  const Mat3 qq = q * q;
  return (vp.beta1 * contract(q, d)) * q + vp.beta4 * d + vp.beta5 * dq + vp.beta6 * qd +
         vp.beta7 * (d * qq + qq * d) + (vp.mu2 / 2.0) * n + vp.mu1 * commutator(q, n);
}

QsTendency qs_rhs(const QsState& s, const MaterialParams& p, DiffContext& ctx) {
  require_inertia(p);
  require_same_grid(ctx.grid(), s.q.grid());
  const PeriodicGrid& g = s.q.grid();
  const ViscosityParams& vp = p.viscosity;

  const TensorField h = molecular_field(s.q, p.bulk, p.elastic, p.eps, ctx);
  Mat3Field d, w;
  ctx.strain_and_vorticity(s.v, d, w);
  Mat3Field stress = distortion_stress(s.q, s.q, p.elastic, ctx);

  QsTendency f(g);
  for (int pt = 0; pt < g.size(); ++pt) {
    const Mat3 q = tensor_at(s.q, pt).matrix();
    const Mat3 qd = tensor_at(s.qdot, pt).matrix();
    const Mat3 dm = mat_at(d, pt);
    const Mat3 wm = mat_at(w, pt);
    const Mat3 force = tensor_at(h, pt).matrix() - (vp.mu2 / 2.0) * dm + vp.mu1 * commutator(wm, q) - vp.mu1 * qd;
    set_tensor(f.qdot, pt, sym_traceless((1.0 / vp.J) * force));
    Mat3 sigma = mat_at(stress, pt) + qs_viscous_stress(q, qd, dm, wm, vp);
    const double iso = trace(sigma) / 3.0;
    for (int i = 0; i < 3; ++i) sigma(i, i) -= iso;
    set_mat(stress, pt, sigma);
  }
  f.q = s.qdot - ctx.advect(s.v, s.q);
  f.qdot -= ctx.advect(s.v, s.qdot);
  f.v = ctx.leray_project(ctx.divergence(stress) - ctx.advect(s.v, s.v));

  // Linear part exactly, everything else through the 2/3 filter.
  SpectralLinearOps ops = make_ops(p, ctx);
  const QsState lin = apply_linear(s, ops);
  f.axpy(-1.0, lin);
  f.q = ctx.dealias(f.q);
  f.qdot = ctx.dealias(f.qdot);
  f.v = ctx.dealias(f.v);
  f.axpy(1.0, lin);
  return f;
}

double qs_stiffness_dt_bound(const QsState& s, const MaterialParams& p, double safety) {
  require_inertia(p);
  const double qmax = max_pointwise_norm(s.q);
  const BulkParams& bp = p.bulk;
  const double rate = (bp.a + 2.0 * bp.b * qmax + 3.0 * bp.c * qmax * qmax + stabilization(bp)) / p.eps;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return safety * std::sqrt(p.viscosity.J / rate);
}

QsState qs_step(const QsState& s, const QsConfig& cfg, DiffContext& ctx, StepReport* report) {
  const MaterialParams& p = cfg.material;
  require_inertia(p);
  if (!(cfg.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const PeriodicGrid& g = s.q.grid();
  const double cfl = linf_norm(s.v) * std::sqrt(3.0) * cfg.dt / std::min(g.dx(), g.dy());
  const double bound = qs_stiffness_dt_bound(s, p, cfg.stiffness_safety);
  if (report) {
    report->cfl = cfl;
    report->dt_bound = bound;
  }
  if (cfl > cfg.cfl_limit) throw Error(ErrorCode::CflViolation, "advective CFL number " + std::to_string(cfl));
  if (cfg.dt > bound)
    throw Error(ErrorCode::StiffnessViolation,
                "dt " + std::to_string(cfg.dt) + " exceeds the explicit bound " + std::to_string(bound));

  QsSystem sys{p, ctx, make_ops(p, ctx)};
  QsState next = imex_step(s, cfg.dt, cfg.imex_theta, sys);
  next.v = ctx.leray_project(next.v);
  next.t = s.t + cfg.dt;
  if (!all_finite(next.q) || !all_finite(next.qdot) || !all_finite(next.v) || linf_norm(next.q) > 1e6)
    throw Error(ErrorCode::StateBlowup, "non-finite or unbounded state at t = " + std::to_string(next.t));
  return next;
}

QsEnergy qs_energy(const QsState& s, const MaterialParams& p, DiffContext& ctx) {
  if (!(p.eps > 0.0)) throw Error(ErrorCode::BadEpsilon, "eps must be positive");
  require_same_grid(ctx.grid(), s.q.grid());
  QsEnergy e;
  e.kinetic = 0.5 * inner(s.v, s.v);
  e.inertial = 0.5 * p.viscosity.J * inner(s.qdot, s.qdot);
  e.free_energy = bulk_energy(s.q, p.bulk) / p.eps + elastic_energy(s.q, p.elastic, ctx);
  e.total = e.kinetic + e.inertial + e.free_energy;
  return e;
}

double qs_dissipation_rate(const QsState& s, const MaterialParams& p, DiffContext& ctx) {
  const ViscosityParams& vp = p.viscosity;
  if (!(vp.mu1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu1 must be positive");
  Mat3Field d, w;
  ctx.strain_and_vorticity(s.v, d, w);
  const double reduced = vp.beta4 - vp.mu2 * vp.mu2 / (4.0 * vp.mu1);
  double r = 0.0;
  for (int pt = 0; pt < s.q.points(); ++pt) {
    const Mat3 q = tensor_at(s.q, pt).matrix();
    const Mat3 qd = tensor_at(s.qdot, pt).matrix();
    const Mat3 dm = mat_at(d, pt);
    const Mat3 wm = mat_at(w, pt);
    const Mat3 dq = dm * q;
    const double qdd = contract(q, dm);
    const Mat3 rel = qd - commutator(wm, q) + (vp.mu2 / (2.0 * vp.mu1)) * dm;
    r -= vp.beta1 * qdd * qdd + reduced * contract(dm, dm) + (vp.beta5 + vp.beta6) * contract(dq, dm) +
         2.0 * vp.beta7 * contract(dq, dq) + vp.mu1 * contract(rel, rel);
  }
  return r * s.q.grid().cell_area();
}

double qs_dissipation_residual(const QsState& s0, const QsState& s1, const MaterialParams& p, DiffContext& ctx,
                               double* rate_mid) {
  require_same_grid(s0.q.grid(), s1.q.grid());
  const double dt = s1.t - s0.t;
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "states must be ordered in time");
  QsState mid = s0;
  mid.axpy(1.0, s1);
  mid.q *= 0.5;
  mid.qdot *= 0.5;
  mid.v *= 0.5;
  const double r = qs_dissipation_rate(mid, p, ctx);
  if (rate_mid) *rate_mid = r;
  const double de = (qs_energy(s1, p, ctx).total - qs_energy(s0, p, ctx).total) / dt;
  return std::abs(de - r);
}

}  // namespace limitlab
