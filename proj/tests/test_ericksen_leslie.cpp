#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "limitlab/ericksen_leslie.hpp"
#include "limitlab/lab/initial_data.hpp"

using namespace limitlab;
using testing::max_abs_field;
using testing::Rng;

namespace {

LeslieParams demo_leslie() { return map_leslie(ViscosityParams{}, {1.0, 1.0, 1.0}, {1.0, 0.0, 0.0}); }

ElConfig config_for(const LeslieParams& lp, double dt) {
  ElConfig c;
  c.leslie = lp;
  c.dt = dt;
  return c;
}

ElState perturbed(const PeriodicGrid& g, DiffContext& ctx, std::uint64_t seed, double amp_v = 0.1) {
  InitialRecipe r;
  r.name = "smooth";
  r.amplitude_n = 0.3;
  r.amplitude_v = amp_v;
  r.seed = seed;
  return make_el_initial(g, r, ctx);
}

ElState run(ElState s, const ElConfig& c, DiffContext& ctx, int steps) {
  for (int k = 0; k < steps; ++k) s = el_step(s, c, ctx);
  return s;
}

double distance(const ElState& a, const ElState& b) {
  return std::sqrt(inner(a.n - b.n, a.n - b.n) + inner(a.ndot - b.ndot, a.ndot - b.ndot) + inner(a.v - b.v, a.v - b.v));
}

// Rotation by pi/2 about z on a square grid: f'(x) = R f(R^T x).
VectorField rotate(const VectorField& f) {
  const int n = f.grid().nx;
  VectorField r(f.grid());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Vec3 a = vec_at(f, ((n - ix) % n) * n + iy);
      set_vec(r, iy * n + ix, {{-a[1], a[0], a[2]}});
    }
  return r;
}

ElState rotate(const ElState& s) {
  ElState r = s;
  r.n = rotate(s.n);
  r.ndot = rotate(s.ndot);
  r.v = rotate(s.v);
  return r;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("ericksen_leslie") {

TEST_CASE("molecular field of a constant director vanishes") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  LeslieParams lp = demo_leslie();
  lp.k4 = 0.7;
  const ElState s = el_equilibrium(g, {{0.3, -0.4, 0.5}});
  CHECK(max_abs_field(frank_molecular_field(s.n, lp, ctx)) <= 1e-14);
  CHECK(frank_energy(s.n, lp, ctx) == 0.0);
}

TEST_CASE("one-constant molecular field is K Laplacian n to second order") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  LeslieParams lp;
  lp.k1 = lp.k2 = lp.k3 = 2.0;
  double err[2];
  for (int j = 0; j < 2; ++j) {
    const double delta = 1e-2 / (1 << j);
    VectorField n(g);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const Vec3 v{{1.0, delta * std::sin(g.x(ix)), 0.0}};
        set_vec(n, iy * g.nx + ix, (1.0 / norm(v)) * v);
      }
    VectorField diff = frank_molecular_field(n, lp, ctx);
    diff.axpy(-2.0, ctx.laplacian(n));
    err[j] = max_abs_field(diff);
    CHECK(err[j] <= 10.0 * delta * delta);
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("molecular field is minus the gradient of the discrete Frank energy") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  Rng r(71);
  LeslieParams lp;
  lp.k1 = 1.0;
  lp.k2 = 0.7;
  lp.k3 = 1.3;
  lp.k4 = 0.4;
  for (int i = 0; i < 3; ++i) {
    const VectorField n = testing::smooth_director(g, r, 0.4, 2);
    const VectorField dn = testing::tangential(n, testing::smooth_field<3>(g, r, 2));
    auto E = [&](double h) {
      VectorField x = n;
      x.axpy(h, dn);
      return frank_energy(x, lp, ctx);
    };
    const double exact = -inner(frank_molecular_field(n, lp, ctx), dn);
    const double fd = oracle::central_difference(E, 1e-4);
    CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
  }
}

TEST_CASE("saddle-splay constant does not change h") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  Rng r(72);
  LeslieParams a = demo_leslie(), b = a;
  b.k4 = 1.1;
  const VectorField n = testing::smooth_director(g, r, 0.5, 3);
  CHECK(max_abs_field(frank_molecular_field(n, a, ctx) - frank_molecular_field(n, b, ctx)) <= 1e-11);
  CHECK(frank_energy(n, a, ctx) != frank_energy(n, b, ctx));
}

TEST_CASE("Leslie angle in simple shear") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  ViscosityParams vp;
  vp.mu1 = 1.0;
  vp.mu2 = 4.0;
  vp.beta6 = vp.beta5 + vp.mu2;
  const LeslieParams lp = map_leslie(vp, {1.0, 1.0, 1.0}, {1.0, 0.0, 0.0});
  REQUIRE(lp.alpha2 > 0.0);
  REQUIRE(lp.alpha3 > 0.0);
  const double shear = 0.8;
  // tangential director acceleration at y = 0 for n = (cos th, sin th, 0), v = (A sin y, 0, 0)
  auto tangential_acc = [&](double th) {
    ElState s(g);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const int p = iy * g.nx + ix;
        set_vec(s.n, p, {{std::cos(th), std::sin(th), 0.0}});
        s.v(0, p) = shear * std::sin(g.y(iy));
      }
    const Vec3 acc = vec_at(el_rhs(s, lp, ctx).nddot, 0);
    return -std::sin(th) * acc[0] + std::cos(th) * acc[1];
  };
  const double th = oracle::bisect(tangential_acc, 0.0, M_PI / 4);
  const double t2 = std::tan(th) * std::tan(th);
  MESSAGE("Leslie angle " << th << ", tan^2 " << t2 << ", alpha2/alpha3 " << lp.alpha2 / lp.alpha3);
  CHECK(t2 == doctest::Approx(lp.alpha2 / lp.alpha3).epsilon(1e-10));
  CHECK(std::abs(tangential_acc(th)) <= 1e-10);
}

TEST_CASE("constraint force of a free director") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  Rng r(73);
  const LeslieParams lp = demo_leslie();
  const Vec3 n = r.unit();
  Vec3 m = r.unit();
  m = m - dot(m, n) * n;
  ElState s(g);
  for (int p = 0; p < g.size(); ++p) {
    set_vec(s.n, p, n);
    set_vec(s.ndot, p, m);
  }
  const ElTendency t = el_rhs(s, lp, ctx);
  // normal part is the constraint force -|ndot|^2 n, the tangential part is the damping -gamma1 ndot / I
  double normal = 0, tangential = 0;
  for (int p = 0; p < g.size(); ++p) {
    const Vec3 a = vec_at(t.nddot, p);
    normal = std::max(normal, std::abs(dot(a, n) + dot(m, m)));
    tangential = std::max(tangential, norm(a - dot(a, n) * n + (lp.gamma1 / lp.I) * m));
  }
  CHECK(normal <= 1e-14);
  CHECK(tangential <= 1e-12);
}

TEST_CASE("the multiplier solve satisfies the cross-product form") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  Rng r(74);
  const LeslieParams lp = demo_leslie();
  for (int i = 0; i < 3; ++i) {
    ElState s(g);
    s.n = testing::smooth_director(g, r, 0.4, 2);
    s.ndot = testing::tangential(s.n, testing::smooth_field<3>(g, r, 2, 0.3));
    s.v = ctx.leray_project(testing::smooth_field<3>(g, r, 2, 0.3));
    const ElTendency t = el_rhs(s, lp, ctx);
    const VectorField h = frank_molecular_field(s.n, lp, ctx);
    Mat3Field d, w;
    ctx.strain_and_vorticity(s.v, d, w);
    double worst = 0, scale = 0;
    for (int p = 0; p < g.size(); ++p) {
      const Vec3 n = vec_at(s.n, p);
      const Vec3 big_n = vec_at(s.ndot, p) - mat_at(w, p) * n;
      const Vec3 f = lp.I * vec_at(t.nddot, p) - vec_at(h, p) + lp.gamma1 * big_n + lp.gamma2 * (mat_at(d, p) * n);
      worst = std::max(worst, norm(cross(n, f)));
      scale = std::max(scale, norm(vec_at(h, p)));
      // second derivative of |n|^2 vanishes
      CHECK(std::abs(dot(n, vec_at(t.nddot, p)) + dot(vec_at(s.ndot, p), vec_at(s.ndot, p))) <= 1e-12);
    }
    CHECK(worst <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("equilibrium is a fixed point") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const ElState s0 = el_equilibrium(g, {{0.0, 0.6, 0.8}});
  const ElState s = run(s0, config_for(demo_leslie(), 1e-3), ctx, 100);
  CHECK(max_abs_field(s.n - s0.n) <= 1e-12);
  CHECK(max_abs_field(s.ndot) <= 1e-12);
  CHECK(max_abs_field(s.v) <= 1e-12);
}

TEST_CASE("temporal self-convergence") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const LeslieParams lp = demo_leslie();
  const ElState s0 = perturbed(g, ctx, 3);
  ElState x[3];
  for (int j = 0; j < 3; ++j) x[j] = run(s0, config_for(lp, 4e-3 / (1 << j)), ctx, 25 << j);
  const double order = std::log2(distance(x[0], x[1]) / distance(x[1], x[2]));
  MESSAGE("observed order " << order);
  CHECK(order >= 1.0);
}

TEST_CASE("energy decreases and the constraints hold over a run") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const LeslieParams lp = demo_leslie();
  CHECK(lp.I == doctest::Approx(0.45));
  CHECK(lp.gamma1 == doctest::Approx(9.0));
  REQUIRE(check_el_dissipative(lp).pass);
  const ElConfig c = config_for(lp, 1e-3);
  ElState s = perturbed(g, ctx, 4, 0.0);
  double e = el_energy(s, lp, ctx).total;
  const double e0 = e;
  double worst = -1e300, unit = 0, tang = 0, div = 0, rate = -1e300;
  for (int k = 0; k < 200; ++k) {
    StepReport rep;
    const ElState next = el_step(s, c, ctx, &rep);
    double rm = 0;
    el_energy_residual(s, next, lp, ctx, &rm);
    rate = std::max(rate, rm);
    const double en = el_energy(next, lp, ctx).total;
    worst = std::max(worst, en - e);
    e = en;
    s = next;
    for (int p = 0; p < g.size(); ++p) {
      unit = std::max(unit, std::abs(norm(vec_at(s.n, p)) - 1.0));
      tang = std::max(tang, std::abs(dot(vec_at(s.n, p), vec_at(s.ndot, p))));
    }
    div = std::max(div, linf_norm(ctx.divergence(s.v)));
  }
  CHECK(worst <= 1e-10 * std::abs(e0));
  CHECK(e < e0);
  CHECK(rate <= 0.0);
  CHECK(unit <= 1e-10);
  CHECK(tang <= 1e-8);
  CHECK(div <= 1e-10);
}

TEST_CASE("energy-law residual") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const LeslieParams lp = demo_leslie();
  const ElState eq = el_equilibrium(g, {{1, 0, 0}});
  CHECK(el_energy_residual(eq, el_step(eq, config_for(lp, 1e-3), ctx), lp, ctx) <= 1e-12);

  const ElState s = run(perturbed(g, ctx, 5), config_for(lp, 1e-3), ctx, 20);
  const double r1 = el_energy_residual(s, el_step(s, config_for(lp, 2e-3), ctx), lp, ctx);
  const double r2 = el_energy_residual(s, el_step(s, config_for(lp, 1e-3), ctx), lp, ctx);
  MESSAGE("residual ratio " << r1 / r2);
  CHECK(r1 / r2 >= 1.8);
}

TEST_CASE("frame indifference under a quarter turn") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const LeslieParams lp = demo_leslie();
  const ElState s = perturbed(g, ctx, 6);
  const ElConfig c = config_for(lp, 1e-3);
  CHECK(distance(el_step(rotate(s), c, ctx), rotate(el_step(s, c, ctx))) <= 1e-10);
}

TEST_CASE("overdamped path") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  LeslieParams lp = demo_leslie();
  lp.I = 0.0;
  ElState s = perturbed(g, ctx, 7, 0.0);
  const double e0 = el_energy(s, lp, ctx).total;
  s = run(s, config_for(lp, 1e-3), ctx, 50);
  CHECK(el_energy(s, lp, ctx).total < e0);
  double unit = 0;
  for (int p = 0; p < g.size(); ++p) unit = std::max(unit, std::abs(norm(vec_at(s.n, p)) - 1.0));
  CHECK(unit <= 1e-10);
  // the overdamped rate solves gamma1 N = P(h - gamma2 D n), so it is tangential
  double tang = 0;
  for (int p = 0; p < g.size(); ++p) tang = std::max(tang, std::abs(dot(vec_at(s.n, p), vec_at(s.ndot, p))));
  CHECK(tang <= 1e-12);

  lp.gamma1 = 0.0;
  CHECK(code_of([&] { el_rhs(s, lp, ctx); }) == ErrorCode::DegenerateGamma);
}

TEST_CASE("errors") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const LeslieParams lp = demo_leslie();
  ElState s = perturbed(g, ctx, 8);
  VectorField n = s.n;
  n(0, 5) *= 1.1;
  CHECK(code_of([&] { frank_molecular_field(n, lp, ctx); }) == ErrorCode::NonUnitField);

  ElState fast = s;
  fast.v *= 1e4;
  CHECK(code_of([&] { el_step(fast, config_for(lp, 1e-3), ctx); }) == ErrorCode::CflViolation);

  ElState bad = s;
  bad.ndot(1, 2) = std::nan("");
  CHECK(code_of([&] { el_step(bad, config_for(lp, 1e-3), ctx); }) == ErrorCode::StateBlowup);
}

}  // TEST_SUITE
