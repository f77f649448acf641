#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "limitlab/hilbert_bridge.hpp"
#include "limitlab/lab/initial_data.hpp"

using namespace limitlab;
using testing::max_abs_field;
using testing::Rng;

namespace {

const BulkParams kUnit{1.0, 1.0, 1.0};

MaterialParams demo(double eps = 0.1) {
  MaterialParams p;
  p.eps = eps;
  return p;
}

ElState el_state(const PeriodicGrid& g, DiffContext& ctx, std::uint64_t seed, double amp_v = 0.1) {
  InitialRecipe r;
  r.name = "random";
  r.amplitude_n = 0.3;
  r.amplitude_v = amp_v;
  r.amplitude_ndot = 0.1;
  r.seed = seed;
  return make_el_initial(g, r, ctx);
}

double in_fraction(const TensorField& res, const VectorField& n) {
  TensorField pin(res.grid());
  for (int pt = 0; pt < res.points(); ++pt)
    set_tensor(pin, pt, project_in(Director::normalized(vec_at(n, pt)), tensor_at(res, pt)));
  return l2_norm(pin) / l2_norm(res);
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

TEST_SUITE("hilbert_bridge") {

TEST_CASE("bulk gradient expansion reconstructs T exactly") {
  Rng r(81);
  const QTensor z;
  for (int i = 0; i < 50; ++i) {
    const BulkParams bp{r.uniform(0, 2), r.uniform(0, 2), r.uniform(0.2, 2)};
    const QTensor q0 = uniaxial(Director(r.unit()), critical_s1(bp));

    const ExpansionTerms zero = expand_bulk_gradient(q0, z, z, z, z, 0.3, bp);
    CHECK(norm(zero.reconstruct()) <= 1e-12);
    CHECK(norm(zero.h1) == 0.0);
    CHECK(norm(zero.tr) == 0.0);

    const QTensor q1 = r.tensor(), q2 = r.tensor(), q3 = r.tensor(), qr = r.tensor();
    for (double eps : {1.0, 0.1}) {
      const ExpansionTerms e = expand_bulk_gradient(q0, q1, z, z, z, eps, bp);
      CHECK(norm(e.reconstruct() - bulk_gradient(q0 + eps * q1, bp)) <= 1e-12);
      // with only Q1 the eps^2 and eps^3 groups are B1 and (c/3) C(Q1,Q1,Q1)
      const QTensor b1 = -(bp.b / 2.0) * bform(q1, q1) + bp.c * cform(q0, q1, q1);
      CHECK(norm(e.order2 - b1) <= 1e-13);
      CHECK(norm(e.order3 - (bp.c / 3.0) * cform(q1, q1, q1)) <= 1e-13);
    }
    const double eps = 0.3;
    const QTensor full = q0 + eps * q1 + eps * eps * q2 + std::pow(eps, 3) * (q3 + qr);
    const ExpansionTerms e = expand_bulk_gradient(q0, q1, q2, q3, qr, eps, bp);
    CHECK(norm(e.reconstruct() - bulk_gradient(full, bp)) <= 1e-11);
  }
  const Director n(Vec3{{0, 0, 1}});
  const QTensor q1 = r.tensor();
  const QTensor q0 = uniaxial(n, 1.5);
  CHECK(norm(expand_bulk_gradient(q0, q1, z, z, z, 0.1, kUnit).h1 - hn_apply(n, q1, kUnit)) <= 1e-13);
  CHECK(code_of([&] { expand_bulk_gradient(uniaxial(n, 1.0), q1, z, z, z, 0.1, kUnit); }) == ErrorCode::NotCritical);
}

TEST_CASE("O(1) residual of a constant director at rest vanishes") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  const ElState el = el_equilibrium(g, {{0.6, 0.0, 0.8}});
  CHECK(max_abs_field(o1_residual(el, demo(), ctx)) <= 1e-13);
}

TEST_CASE("in-plane part of -L(Q0) matches the Frank molecular field") {
  const PeriodicGrid g(128, 128);
  DiffContext ctx(g);
  Rng r(82);
  MaterialParams p = demo();
  p.viscosity.J = 0.0;
  p.elastic = {1.0, 0.4, 0.3};
  const double s = critical_s1(p.bulk);
  const LeslieParams lp = map_leslie(p.viscosity, p.bulk, p.elastic);
  ElState el(g);
  el.n = testing::smooth_director(g, r, 0.3, 1);
  const TensorField res = o1_residual(el, p, ctx);
  CHECK(max_abs_field(res + elastic_operator(uniaxial_field(el.n, s), p.elastic, ctx)) <= 1e-12);

  const VectorField h = frank_molecular_field(el.n, lp, ctx);
  const VectorField m = testing::tangential(el.n, testing::smooth_field<3>(g, r, 2));
  double worst = 0, scale = 0;
  for (int pt = 0; pt < g.size(); ++pt) {
    const Vec3 n = vec_at(el.n, pt), t = vec_at(m, pt);
    // L(Q0):(n t + t n) = -(1/s) h.t, and res = -L(Q0)
    const double lhs = -frobenius(tensor_at(res, pt).matrix(), outer(n, t) + outer(t, n));
    const double rhs = -dot(vec_at(h, pt), t) / s;
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  MESSAGE("in-plane identity error " << worst << " relative to " << scale);
  CHECK(worst <= 1e-8 * scale);
}

TEST_CASE("O(1) residual has no in-plane part on director-model states") {
  const PeriodicGrid g(64, 64);
  DiffContext ctx(g);
  const MaterialParams p = demo();
  const LeslieParams lp = map_leslie(p.viscosity, p.bulk, p.elastic);
  ElConfig c;
  c.leslie = lp;
  c.dt = 1e-3;
  ElState el = el_state(g, ctx, 3);
  for (int k = 0; k < 10; ++k) el = el_step(el, c, ctx);
  const double frac = in_fraction(o1_residual(el, p, ctx), el.n);
  MESSAGE("in-plane fraction " << frac);
  CHECK(frac <= 1e-6);
}

TEST_CASE("Q1 perp lies off the kernel and inverts H_n") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  const MaterialParams p = demo();
  const ElState el = el_state(g, ctx, 4);
  const TensorField q1 = q1_perp(el, p, ctx);
  const TensorField res = o1_residual(el, p, ctx);
  double off = 0, inv = 0;
  for (int pt = 0; pt < g.size(); ++pt) {
    const Director n = Director::normalized(vec_at(el.n, pt));
    const QTensor x = tensor_at(q1, pt);
    off = std::max(off, norm(project_out(n, x) - x));
    inv = std::max(inv, norm(hn_apply(n, x, p.bulk) - project_out(n, tensor_at(res, pt))));
  }
  CHECK(off <= 1e-9);
  CHECK(inv <= 1e-9);
  const ExpansionData e = expansion_data(el, p, 1, ctx);
  CHECK(max_abs_field(e.q1_perp - q1) == 0.0);
  CHECK(max_abs_field(e.q0 - uniaxial_field(el.n, critical_s1(p.bulk))) == 0.0);
  CHECK(max_abs_field(expansion_data(el, p, 0, ctx).q1_perp) == 0.0);
  CHECK(code_of([&] { expansion_data(el, p, 2, ctx); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("well-prepared data") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  Rng r(83);
  MaterialParams p = demo();
  const double s = critical_s1(p.bulk);

  const ElState c = el_equilibrium(g, {{0, 1, 0}});
  const QsState q = build_well_prepared(c.n, c.ndot, c.v, p, 0, ctx);
  CHECK(max_abs_field(q.q - uniaxial_field(c.n, s)) == 0.0);
  CHECK(max_abs_field(q.qdot) == 0.0);

  // elastic terms only: Q1 perp = -H_n^{-1} P^out L(Q0)
  ElState el(g);
  el.n = testing::smooth_director(g, r, 0.3, 2);
  const QsState w = build_well_prepared(el.n, el.ndot, el.v, p, 1, ctx);
  const TensorField lq0 = elastic_operator(uniaxial_field(el.n, s), p.elastic, ctx);
  double worst = 0;
  for (int pt = 0; pt < g.size(); ++pt) {
    const Director n = Director::normalized(vec_at(el.n, pt));
    const QTensor expect = -1.0 * hn_inverse(n, project_out(n, tensor_at(lq0, pt)), p.bulk);
    const QTensor got = (1.0 / p.eps) * (tensor_at(w.q, pt) - uniaxial(n, s));
    worst = std::max(worst, norm(got - expect));
  }
  CHECK(worst <= 1e-9);

  const ElState m = el_state(g, ctx, 5);
  double prev = 0;
  for (double eps : {0.1, 0.05, 0.025}) {
    p.eps = eps;
    const QsState x = build_well_prepared(m.n, m.ndot, m.v, p, 1, ctx);
    const double dist = l2_norm(x.q - uniaxial_field(m.n, s));
    CHECK(dist == doctest::Approx(eps * l2_norm(q1_perp(m, p, ctx))).epsilon(1e-12));
    if (prev > 0) CHECK(prev / dist == doctest::Approx(2.0).epsilon(1e-12));
    prev = dist;
    CHECK(max_abs_field(x.v - m.v) == 0.0);
  }

  VectorField bad = m.n;
  bad(0, 0) *= 1.01;
  CHECK(code_of([&] { build_well_prepared(bad, m.ndot, m.v, p, 1, ctx); }) == ErrorCode::NonUnitField);
  const VectorField rough = testing::smooth_field<3>(g, r, 2);
  CHECK(code_of([&] { build_well_prepared(m.n, m.ndot, rough, p, 1, ctx); }) == ErrorCode::InvalidArgument);
  MaterialParams zero = p;
  zero.eps = 0.0;
  CHECK(code_of([&] { build_well_prepared(m.n, m.ndot, m.v, zero, 1, ctx); }) == ErrorCode::BadEpsilon);
}

TEST_CASE("remainder energy vanishes on the truncated expansion") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  const MaterialParams p = demo(0.05);
  const ElState el = el_state(g, ctx, 6);
  const QsState q0 = build_well_prepared(el.n, el.ndot, el.v, p, 0, ctx);
  CHECK(remainder_energy(q0, el, p, 0, ctx).total <= 1e-20);

  // order 1: the expansion's material derivative carries eps (v0.grad) Q1 perp
  QsState q1 = build_well_prepared(el.n, el.ndot, el.v, p, 1, ctx);
  const TensorField qp = q1_perp(el, p, ctx);
  q1.qdot.axpy(p.eps, ctx.advect(el.v, qp));
  const RemainderEnergy r1 = remainder_energy(q1, el, p, 1, ctx);
  MESSAGE("order-1 remainder energy " << r1.total);
  CHECK(r1.total <= 1e-20);

  // with a supplied d_t Q1 perp the same holds once qdot includes it
  const TensorField rate = 0.7 * qp;
  QsState q2 = q1;
  q2.qdot.axpy(p.eps, rate);
  CHECK(remainder_energy(q2, el, p, 1, ctx, &rate).total <= 1e-20);
}

TEST_CASE("remainder energy blocks are non-negative") {
  const PeriodicGrid g(32, 32);
  DiffContext ctx(g);
  Rng r(84);
  const MaterialParams p = demo(0.1);
  for (int i = 0; i < 5; ++i) {
    const ElState el = el_state(g, ctx, 10 + i);
    QsState q = build_well_prepared(el.n, el.ndot, el.v, p, 1, ctx);
    q.q += sym_traceless(testing::smooth_field<9>(g, r, 2, 0.05));
    q.qdot += sym_traceless(testing::smooth_field<9>(g, r, 2, 0.05));
    q.v += ctx.leray_project(testing::smooth_field<3>(g, r, 2, 0.05));
    const RemainderEnergy e = remainder_energy(q, el, p, i % 2, ctx);
    CHECK(e.base > 0.0);
    CHECK(e.first > 0.0);
    CHECK(e.second > 0.0);
    CHECK(e.total == doctest::Approx(e.base + e.first + e.second).epsilon(1e-15));
  }
  // pointwise H_n form on random tensors
  for (int i = 0; i < 1000; ++i) {
    const Director n(r.unit());
    const QTensor x = r.tensor();
    CHECK(frobenius(hn_apply(n, x, kUnit), x) >= -1e-14);
  }
}

}  // TEST_SUITE
