#include "limitlab/ericksen_leslie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace limitlab {

namespace {

double levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) ? 1.0 : -1.0;
}

// M_bc = sum_a y_a eps_abc
Mat3 levi_contract(const Vec3& y) {
  Mat3 m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) m(b, c) += y[a] * levi(a, b, c);
  return m;
}

struct DirectorGradient {
  VectorField dx, dy;
};

DirectorGradient gradient_of(const VectorField& n, DiffContext& ctx) {
  return {ctx.partial(n, Axis::X), ctx.partial(n, Axis::Y)};
}

Mat3 grad_at(const DirectorGradient& g, int p) {
  Mat3 m;
  for (int k = 0; k < 3; ++k) {
    m(0, k) = g.dx(k, p);
    m(1, k) = g.dy(k, p);
  }
  return m;
}

void check_unit(const VectorField& n) {
  for (int p = 0; p < n.points(); ++p) {
    const double len = norm(vec_at(n, p));
    if (std::abs(len - 1.0) > 1e-8)
      throw Error(ErrorCode::NonUnitField, "|n| = " + std::to_string(len) + " at point " + std::to_string(p));
  }
}

double stiffest_constant(const LeslieParams& lp) { return std::max({lp.k1, lp.k2, lp.k3, 0.0}); }

struct ElOps {
  SpectralLinearOps director;  // inertial: oscillator on (n, ndot); overdamped: diffusion on n
  SpectralLinearOps velocity;
  bool inertial;
};

ElOps make_ops(const LeslieParams& lp, DiffContext& ctx) {
  const double K = stiffest_constant(lp);
  const bool inertial = lp.I > 0.0;
  const double I = lp.I;
  const double g1 = lp.gamma1;
  SpectralLinearOps director =
      inertial ? SpectralLinearOps(ctx, [=](double k2) { return OscillatorBlock{K * k2 / I, g1 / I}; }, 0.0)
               : SpectralLinearOps(ctx, [](double) { return OscillatorBlock{}; }, K / g1);
  SpectralLinearOps velocity(ctx, [](double) { return OscillatorBlock{}; }, lp.alpha4 / 2.0);
  return {std::move(director), std::move(velocity), inertial};
}

ElState apply_linear(const ElState& x, ElOps& ops) {
  ElState r(x.n.grid());
  for (int c = 0; c < 3; ++c) {
    if (ops.inertial)
      ops.director.apply_pair(x.n.component(c), x.ndot.component(c), r.n.component(c), r.ndot.component(c));
    else
      ops.director.apply_diffusion(x.n.component(c), r.n.component(c));
    ops.velocity.apply_diffusion(x.v.component(c), r.v.component(c));
  }
  return r;
}

ElState solve_linear(const ElState& rhs, double tau, ElOps& ops) {
  ElState r(rhs.n.grid());
  r.t = rhs.t;
  for (int c = 0; c < 3; ++c) {
    if (ops.inertial) {
      ops.director.solve_pair(rhs.n.component(c), rhs.ndot.component(c), tau, r.n.component(c),
                              r.ndot.component(c));
    } else {
      ops.director.solve_diffusion(rhs.n.component(c), tau, r.n.component(c));
      std::copy(rhs.ndot.component(c).begin(), rhs.ndot.component(c).end(), r.ndot.component(c).begin());
    }
    ops.velocity.solve_diffusion(rhs.v.component(c), tau, r.v.component(c));
  }
  return r;
}

struct Assembled {
  ElTendency tendency;
  VectorField h;
  VectorField ndot;  // material derivative used (state value, or the overdamped closure)
};

Assembled assemble(const ElState& s, const LeslieParams& lp, DiffContext& ctx) {
  if (!(lp.gamma1 > 0.0)) throw Error(ErrorCode::DegenerateGamma, "gamma1 must be positive");
  require_same_grid(ctx.grid(), s.n.grid());
  const PeriodicGrid& g = s.n.grid();
  const bool inertial = lp.I > 0.0;

  Assembled out{{VectorField(g), VectorField(g), VectorField(g), VectorField(g)},
                frank_molecular_field(s.n, lp, ctx, false), VectorField(g)};
  Mat3Field d, w;
  ctx.strain_and_vorticity(s.v, d, w);
  Mat3Field stress = ericksen_stress(s.n, lp, ctx);

  for (int p = 0; p < g.size(); ++p) {
    const Vec3 n = vec_at(s.n, p);
    const Vec3 h = vec_at(out.h, p);
    const Mat3 dm = mat_at(d, p);
    const Mat3 wm = mat_at(w, p);
    const Vec3 dn = dm * n;
    const double n2 = dot(n, n);
    Vec3 ndot, big_n;
    if (inertial) {
      ndot = vec_at(s.ndot, p);
      big_n = ndot - wm * n;
      const Vec3 f = h - lp.gamma1 * big_n - lp.gamma2 * dn;
      const Vec3 acc = (1.0 / lp.I) * (f - (dot(f, n) / n2) * n) - (dot(ndot, ndot) / n2) * n;
      set_vec(out.tendency.nddot, p, acc);
    } else {
      const Vec3 f = h - lp.gamma2 * dn;
      big_n = (1.0 / lp.gamma1) * (f - (dot(f, n) / n2) * n);
      ndot = wm * n + big_n;
    }
    set_vec(out.ndot, p, ndot);
    Mat3 sigma = mat_at(stress, p) + leslie_stress(n, big_n, dm, lp);
    const double iso = trace(sigma) / 3.0;
    for (int i = 0; i < 3; ++i) sigma(i, i) -= iso;
    set_mat(stress, p, sigma);
  }

  ElTendency& t = out.tendency;
  t.dn = out.ndot - ctx.advect(s.v, s.n);
  if (inertial) t.dndot = t.nddot - ctx.advect(s.v, s.ndot);
  t.dv = ctx.leray_project(ctx.divergence(stress) - ctx.advect(s.v, s.v));

  // Linear part exactly, everything else through the 2/3 filter.
  ElOps ops = make_ops(lp, ctx);
  ElState x = s;
  ElState f(g);
  f.n = t.dn;
  f.ndot = t.dndot;
  f.v = t.dv;
  const ElState lin = apply_linear(x, ops);
  f.axpy(-1.0, lin);
  f.n = ctx.dealias(f.n);
  f.ndot = ctx.dealias(f.ndot);
  f.v = ctx.dealias(f.v);
  f.axpy(1.0, lin);
  t.dn = std::move(f.n);
  t.dndot = std::move(f.ndot);
  t.dv = std::move(f.v);
  return out;
}

struct ElSystem {
  const LeslieParams& lp;
  DiffContext& ctx;
  ElOps ops;

  ElState rhs(const ElState& x) {
    Assembled a = assemble(x, lp, ctx);
    ElState f(x.n.grid());
    f.n = std::move(a.tendency.dn);
    f.ndot = std::move(a.tendency.dndot);
    f.v = std::move(a.tendency.dv);
    return f;
  }
  ElState apply_linear(const ElState& x) { return limitlab::apply_linear(x, ops); }
  ElState solve_linear(const ElState& r, double tau) { return limitlab::solve_linear(r, tau, ops); }
};

template <int C>
bool all_finite(const Field<C>& f) {
  for (double x : f.data())
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

FrankLocal frank_local(const Vec3& n, const Mat3& grad, const LeslieParams& lp) {
  FrankLocal r;
  const double div = trace(grad);
  const Vec3 w{{grad(1, 2) - grad(2, 1), grad(2, 0) - grad(0, 2), grad(0, 1) - grad(1, 0)}};

  r.energy += 0.5 * lp.k1 * div * div;
  for (int i = 0; i < 3; ++i) r.flux(i, i) += lp.k1 * div;

  const double tw = dot(n, w);
  r.energy += 0.5 * lp.k2 * tw * tw;
  r.dn += (lp.k2 * tw) * w;
  r.flux += (lp.k2 * tw) * levi_contract(n);

  const Vec3 x = cross(n, w);
  r.energy += 0.5 * lp.k3 * dot(x, x);
  r.dn += lp.k3 * cross(w, x);
  r.flux += lp.k3 * levi_contract(cross(x, n));

  const double saddle = lp.k2 + lp.k4;
  const double trg2 = contract(grad, transpose(grad));
  r.energy += 0.5 * saddle * (trg2 - div * div);
  r.flux += saddle * (transpose(grad) - div * Mat3::identity());
  return r;
}

double frank_energy(const VectorField& n, const LeslieParams& lp, DiffContext& ctx) {
  require_same_grid(ctx.grid(), n.grid());
  const DirectorGradient g = gradient_of(n, ctx);
  double e = 0.0;
  for (int p = 0; p < n.points(); ++p) e += frank_local(vec_at(n, p), grad_at(g, p), lp).energy;
  return e * n.grid().cell_area();
}

VectorField frank_molecular_field(const VectorField& n, const LeslieParams& lp, DiffContext& ctx, bool check) {
  require_same_grid(ctx.grid(), n.grid());
  if (check) check_unit(n);
  const DirectorGradient g = gradient_of(n, ctx);
  Mat3Field flux(n.grid());
  VectorField h(n.grid());
  for (int p = 0; p < n.points(); ++p) {
    const FrankLocal loc = frank_local(vec_at(n, p), grad_at(g, p), lp);
    set_mat(flux, p, loc.flux);
    set_vec(h, p, -loc.dn);
  }
  h += ctx.divergence(flux);
  return h;
}

Mat3Field ericksen_stress(const VectorField& n, const LeslieParams& lp, DiffContext& ctx) {
  require_same_grid(ctx.grid(), n.grid());
  const DirectorGradient g = gradient_of(n, ctx);
  Mat3Field s(n.grid());
  for (int p = 0; p < n.points(); ++p) {
    const Mat3 grad = grad_at(g, p);
    const FrankLocal loc = frank_local(vec_at(n, p), grad, lp);
    set_mat(s, p, -(loc.flux * transpose(grad)));
  }
  return s;
}

Mat3 leslie_stress(const Vec3& n, const Vec3& N, const Mat3& d, const LeslieParams& lp) {
  const Mat3 nn = outer(n, n);
  return (lp.alpha1 * dot(n, d * n)) * nn + lp.alpha2 * outer(N, n) + lp.alpha3 * outer(n, N) + lp.alpha4 * d +
         lp.alpha5 * (d * nn) + lp.alpha6 * (nn * d);
}

ElState el_equilibrium(const PeriodicGrid& g, const Vec3& n) {
  const Director dir = Director::normalized(n);
  ElState s(g);
  for (int p = 0; p < g.size(); ++p) set_vec(s.n, p, dir.vec());
  return s;
}

ElTendency el_rhs(const ElState& s, const LeslieParams& lp, DiffContext& ctx) {
  return assemble(s, lp, ctx).tendency;
}

ElState el_step(const ElState& s, const ElConfig& cfg, DiffContext& ctx, StepReport* report) {
  const LeslieParams& lp = cfg.leslie;
  if (!(lp.gamma1 > 0.0)) throw Error(ErrorCode::DegenerateGamma, "gamma1 must be positive");
  if (!(cfg.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const PeriodicGrid& g = s.n.grid();
  const double cfl = linf_norm(s.v) * std::sqrt(3.0) * cfg.dt / std::min(g.dx(), g.dy());
  if (cfl > cfg.cfl_limit) throw Error(ErrorCode::CflViolation, "advective CFL number " + std::to_string(cfl));

  ElSystem sys{lp, ctx, make_ops(lp, ctx)};
  ElState next = imex_step(s, cfg.dt, cfg.imex_theta, sys);
  next.t = s.t + cfg.dt;
  if (!all_finite(next.n) || !all_finite(next.ndot) || !all_finite(next.v))
    throw Error(ErrorCode::StateBlowup, "non-finite state at t = " + std::to_string(next.t));

  double renorm = 0.0, tangent = 0.0;
  for (int p = 0; p < g.size(); ++p) {
    Vec3 n = vec_at(next.n, p);
    const double len = norm(n);
    if (!(len > 0.0)) throw Error(ErrorCode::StateBlowup, "director vanished");
    renorm = std::max(renorm, std::abs(len - 1.0));
    n *= 1.0 / len;
    set_vec(next.n, p, n);
    if (lp.I > 0.0) {
      const Vec3 m = vec_at(next.ndot, p);
      const double nm = dot(n, m);
      tangent = std::max(tangent, std::abs(nm));
      set_vec(next.ndot, p, m - nm * n);
    }
  }
  next.v = ctx.leray_project(next.v);
  if (lp.I <= 0.0) next.ndot = assemble(next, lp, ctx).ndot;
  if (report) {
    report->cfl = cfl;
    report->renormalization = renorm;
    report->tangent_correction = tangent;
  }
  return next;
}

ElEnergy el_energy(const ElState& s, const LeslieParams& lp, DiffContext& ctx) {
  ElEnergy e;
  e.kinetic = 0.5 * inner(s.v, s.v);
  e.inertial = 0.5 * lp.I * inner(s.ndot, s.ndot);
  e.frank = frank_energy(s.n, lp, ctx);
  e.total = e.kinetic + e.inertial + e.frank;
  return e;
}

double el_dissipation_rate(const ElState& s, const LeslieParams& lp, DiffContext& ctx) {
  const Assembled a = assemble(s, lp, ctx);
  Mat3Field d, w;
  ctx.strain_and_vorticity(s.v, d, w);
  const double g = lp.gamma2 * lp.gamma2 / lp.gamma1;
  double r = 0.0;
  for (int p = 0; p < s.n.points(); ++p) {
    const Vec3 n = vec_at(s.n, p);
    const Mat3 dm = mat_at(d, p);
    const Vec3 dn = dm * n;
    const double dnn = dot(n, dn);
    const Vec3 x = cross(n, vec_at(a.h, p) - lp.I * vec_at(a.tendency.nddot, p));
    r -= (lp.alpha1 + g) * dnn * dnn + lp.alpha4 * contract(dm, dm) + (lp.alpha5 + lp.alpha6 - g) * dot(dn, dn) +
         dot(x, x) / lp.gamma1;
  }
  return r * s.n.grid().cell_area();
}

double el_energy_residual(const ElState& s0, const ElState& s1, const LeslieParams& lp, DiffContext& ctx,
                          double* rate_mid) {
  require_same_grid(s0.n.grid(), s1.n.grid());
  const double dt = s1.t - s0.t;
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "states must be ordered in time");
  ElState mid = s0;
  mid.axpy(1.0, s1);
  mid.v *= 0.5;
  for (int p = 0; p < mid.n.points(); ++p) {
    Vec3 n = vec_at(mid.n, p);
    n *= 1.0 / norm(n);
    const Vec3 m = 0.5 * vec_at(mid.ndot, p);
    set_vec(mid.n, p, n);
    set_vec(mid.ndot, p, m - dot(m, n) * n);
  }
  const double r = el_dissipation_rate(mid, lp, ctx);
  if (rate_mid) *rate_mid = r;
  const double de = (el_energy(s1, lp, ctx).total - el_energy(s0, lp, ctx).total) / dt;
  return std::abs(de - r);
}

}  // namespace limitlab
