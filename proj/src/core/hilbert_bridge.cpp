#include "limitlab/hilbert_bridge.hpp"

#include <array>
#include <cmath>
#include <string>

namespace limitlab {

namespace {

QTensor derivative_at(const QTensor& q0, const QTensor& x, const BulkParams& bp) {
  return bulk_gradient_derivative(q0, x, bp);
}

}  // namespace

QTensor ExpansionTerms::reconstruct() const {
  const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps;
  return t0 + eps * h1 + e2 * order2 + e3 * order3 + e3 * hr + e4 * tr;
}

ExpansionTerms expand_bulk_gradient(const QTensor& q0, const QTensor& q1, const QTensor& q2, const QTensor& q3,
                                    const QTensor& qr, double eps, const BulkParams& bp) {
  const QTensor t0 = bulk_gradient(q0, bp);
  if (norm(t0) > 1e-10) throw Error(ErrorCode::NotCritical, "|T(Q0)| = " + std::to_string(norm(t0)));
  const double b = bp.b, c = bp.c;

  ExpansionTerms e;
  e.eps = eps;
  e.t0 = t0;
  e.h1 = derivative_at(q0, q1, bp);
  e.order2 = derivative_at(q0, q2, bp) - (b / 2.0) * bform(q1, q1) + c * cform(q0, q1, q1);
  e.order3 = derivative_at(q0, q3, bp) - b * bform(q1, q2) + 2.0 * c * cform(q0, q1, q2) +
             (c / 3.0) * cform(q1, q1, q1);
  e.hr = derivative_at(q0, qr, bp);

  // B^eps: quadratic pairs with i + j >= 4 and cubic triples with i + j + k >= 4.
  const std::array<QTensor, 4> q = {q0, q1, q2, q3};
  QTensor high;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i + j >= 4) high -= (b / 2.0) * std::pow(eps, i + j - 4) * bform(q[i], q[j]);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j)
      for (int k = 0; k <= 3; ++k)
        if (i + j + k >= 4) high += (c / 3.0) * std::pow(eps, i + j + k - 4) * cform(q[i], q[j], q[k]);

  const QTensor qhat = q1 + eps * q2 + (eps * eps) * q3;
  const double e2 = eps * eps, e5 = e2 * e2 * eps;
  e.tr = high - b * bform(qhat, qr) + 2.0 * c * cform(qr, qhat, q0) + c * eps * cform(qr, qhat, qhat) -
         (b / 2.0) * e2 * bform(qr, qr) + c * e2 * cform(qr, qr, q0 + eps * qhat) + (c / 3.0) * e5 * cform(qr, qr, qr);
  return e;
}

TensorField uniaxial_field(const VectorField& n, double s) {
  TensorField q(n.grid());
  for (int p = 0; p < n.points(); ++p) {
    Mat3 m = outer(vec_at(n, p), vec_at(n, p));
    for (int i = 0; i < 3; ++i) m(i, i) -= 1.0 / 3.0;
    set_tensor(q, p, sym_traceless(s * m));
  }
  return q;
}

TensorField o1_residual(const ElState& el, const MaterialParams& p, DiffContext& ctx) {
  require_same_grid(ctx.grid(), el.n.grid());
  const double s = critical_s1(p.bulk);
  const ViscosityParams& vp = p.viscosity;
  const LeslieParams lp = map_leslie(vp, p.bulk, p.elastic);

  const TensorField q0 = uniaxial_field(el.n, s);
  const TensorField lq0 = elastic_operator(q0, p.elastic, ctx);
  Mat3Field d, w;
  ctx.strain_and_vorticity(el.v, d, w);
  VectorField nddot(el.n.grid());
  if (vp.J > 0.0) nddot = el_rhs(el, lp, ctx).nddot;

  TensorField r(el.n.grid());
  for (int pt = 0; pt < el.n.points(); ++pt) {
    const Vec3 n = vec_at(el.n, pt);
    const Vec3 m = vec_at(el.ndot, pt);
    const Vec3 a = vec_at(nddot, pt);
    const Mat3 q = tensor_at(q0, pt).matrix();
    const Mat3 qdot = s * (outer(m, n) + outer(n, m));
    const Mat3 qddot = s * (outer(a, n) + 2.0 * outer(m, m) + outer(n, a));
    const Mat3 rhs = -vp.J * qddot - vp.mu1 * (qdot - commutator(mat_at(w, pt), q)) -
                     tensor_at(lq0, pt).matrix() - (vp.mu2 / 2.0) * mat_at(d, pt);
    set_tensor(r, pt, sym_traceless(rhs));
  }
  return r;
}

TensorField q1_perp(const ElState& el, const MaterialParams& p, DiffContext& ctx) {
  const TensorField res = o1_residual(el, p, ctx);
  TensorField out(res.grid());
  for (int pt = 0; pt < res.points(); ++pt) {
    const Director n = Director::normalized(vec_at(el.n, pt));
    set_tensor(out, pt, hn_inverse(n, project_out(n, tensor_at(res, pt)), p.bulk));
  }
  return out;
}

ExpansionData expansion_data(const ElState& el, const MaterialParams& p, int order, DiffContext& ctx) {
  if (order != 0 && order != 1) throw Error(ErrorCode::InvalidArgument, "order must be 0 or 1");
  ExpansionData e{uniaxial_field(el.n, critical_s1(p.bulk)), TensorField(el.n.grid()), order};
  if (order >= 1) e.q1_perp = q1_perp(el, p, ctx);
  return e;
}

QsState build_well_prepared(const VectorField& n0, const VectorField& ndot0, const VectorField& v0,
                            const MaterialParams& p, int order, DiffContext& ctx) {
  if (!(p.eps > 0.0)) throw Error(ErrorCode::BadEpsilon, "eps must be positive");
  for (int pt = 0; pt < n0.points(); ++pt)
    if (std::abs(norm(vec_at(n0, pt)) - 1.0) > 1e-10) throw Error(ErrorCode::NonUnitField, "n0 is not unit");
  const double div = l2_norm(ctx.divergence(v0));
  if (div > 1e-8 * std::max(1.0, l2_norm(v0)))
    throw Error(ErrorCode::InvalidArgument, "v0 is not divergence free");

  ElState el(n0.grid());
  el.n = n0;
  el.ndot = ndot0;
  el.v = v0;
  const ExpansionData e = expansion_data(el, p, order, ctx);
  const double s = critical_s1(p.bulk);

  QsState qs(n0.grid());
  qs.q = e.q0;
  if (order >= 1) qs.q.axpy(p.eps, e.q1_perp);
  for (int pt = 0; pt < n0.points(); ++pt) {
    const Vec3 n = vec_at(n0, pt), m = vec_at(ndot0, pt);
    set_tensor(qs.qdot, pt, sym_traceless(s * (outer(m, n) + outer(n, m))));
  }
  qs.v = v0;
  return qs;
}

namespace {

// (1/eps) <H_n X, X> + <L(X), X>
double hn_eps_form(const TensorField& x, const VectorField& n, const MaterialParams& p, DiffContext& ctx) {
  TensorField hx(x.grid());
  for (int pt = 0; pt < x.points(); ++pt)
    set_tensor(hx, pt, hn_apply(Director::normalized(vec_at(n, pt)), tensor_at(x, pt), p.bulk));
  return inner(hx, x) / p.eps + inner(elastic_operator(x, p.elastic, ctx), x);
}

}  // namespace

RemainderEnergy remainder_energy(const QsState& qs, const ElState& el, const MaterialParams& p, int order,
                                 DiffContext& ctx, const TensorField* q1perp_rate) {
  require_same_grid(qs.q.grid(), el.n.grid());
  require_same_grid(ctx.grid(), el.n.grid());
  if (!(p.eps > 0.0)) throw Error(ErrorCode::BadEpsilon, "eps must be positive");
  const double eps = p.eps;
  const double s = critical_s1(p.bulk);
  const ExpansionData e = expansion_data(el, p, order, ctx);

  TensorField qr = qs.q - e.q0;
  if (order >= 1) qr.axpy(-eps, e.q1_perp);
  qr *= 1.0 / eps;

  VectorField vr = qs.v - el.v;
  vr *= 1.0 / eps;

  // (d_t + v0.grad) Q_R from the material derivatives of both models.
  TensorField qdot0(qs.q.grid());
  for (int pt = 0; pt < qs.q.points(); ++pt) {
    const Vec3 n = vec_at(el.n, pt), m = vec_at(el.ndot, pt);
    set_tensor(qdot0, pt, sym_traceless(s * (outer(m, n) + outer(n, m))));
  }
  TensorField qrdot = qs.qdot - qdot0;
  const VectorField dv = qs.v - el.v;
  qrdot -= ctx.advect(dv, qs.q);
  if (order >= 1) {
    TensorField corr = ctx.advect(el.v, e.q1_perp);
    if (q1perp_rate) corr += *q1perp_rate;
    qrdot.axpy(-eps, corr);
  }
  qrdot *= 1.0 / eps;

  RemainderEnergy r;
  r.base = inner(vr, vr) + inner(qr, qr) + inner(qrdot, qrdot) + hn_eps_form(qr, el.n, p, ctx);
  for (Axis ax : {Axis::X, Axis::Y}) {
    const VectorField dvr = ctx.partial(vr, ax);
    const TensorField dqr = ctx.partial(qr, ax);
    const TensorField dqrdot = ctx.partial(qrdot, ax);
    r.first += inner(dvr, dvr) + inner(dqrdot, dqrdot) + hn_eps_form(dqr, el.n, p, ctx);
  }
  r.first *= eps * eps;
  {
    const VectorField lvr = ctx.laplacian(vr);
    const TensorField lqr = ctx.laplacian(qr);
    const TensorField lqrdot = ctx.laplacian(qrdot);
    r.second = inner(lvr, lvr) + inner(lqrdot, lqrdot) + hn_eps_form(lqr, el.n, p, ctx);
  }
  r.second *= eps * eps * eps * eps;
  r.total = r.base + r.first + r.second;
  return r;
}

}  // namespace limitlab
